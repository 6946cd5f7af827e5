//! Parking loci: numerically certified fixed-point sets of equivariant
//! polynomial maps.
//!
//! The solver runs a total-degree homotopy from the start system
//! `x_i^D - 1` (gamma trick, Euler predictor, Newton corrector with adaptive
//! steps) to `theta(x) - x`, refines endpoints, and certifies: Newton
//! residual below the endpoint tolerance, smallest singular value of the
//! Jacobian of `theta - x` above the regularity threshold, pairwise point
//! separation, and the expected point count `(kh+1)^n`. Certification
//! failures are returned as first-class reports, never panics: a failed
//! certificate is evidence about theta, not a crash.
//!
//! Tolerance ladder: tracking 1e-8, endpoint refinement 1e-12, matching
//! 1e-8, separation and Jacobian regularity 1e-6.

use crate::group::{ElemId, FlatId, ReflectionGroup};
use crate::num::{self, CMat, C};
use crate::poly::{Poly, PolyMap};
use crate::rng::Rng;
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct TrackConfig {
    pub seed: u64,
    pub track_tol: f64,
    pub endpoint_tol: f64,
    pub match_tol: f64,
    pub sep_tol: f64,
    pub jac_tol: f64,
    pub min_step: f64,
    pub max_newton: usize,
    pub max_retries: usize,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig {
            seed: 0,
            track_tol: 1e-8,
            endpoint_tol: 1e-12,
            match_tol: 1e-8,
            sep_tol: 1e-6,
            jac_tol: 1e-6,
            min_step: 1e-6,
            max_newton: 4,
            max_retries: 5,
        }
    }
}

/// A certified fixed point of theta.
#[derive(Clone, Debug, Serialize)]
pub struct LocusPoint {
    #[serde(serialize_with = "ser_coords")]
    pub coords: Vec<C>,
    pub newton_residual: f64,
    pub jacobian_min_sv: f64,
    pub origin_flag: bool,
}

fn ser_coords<S: serde::Serializer>(v: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// A certified locus with its reconstructed group action.
#[derive(Clone, Debug, Serialize)]
pub struct LocusSolution {
    pub k: usize,
    pub kh: usize,
    pub expected: usize,
    pub theta_ref: String,
    pub min_separation: f64,
    pub points: Vec<LocusPoint>,
    /// permutation of point indices per simple generator
    pub gen_action: Vec<Vec<u32>>,
    /// permutation for the rotation generator (scaling by zeta)
    pub g_action: Vec<u32>,
    /// closed table over all of W (row per element id)
    #[serde(skip)]
    pub w_action: Vec<Vec<u32>>,
}

/// Why a solve or certification failed; reported, not thrown.
#[derive(Clone, Debug, Serialize)]
pub struct LocusFailure {
    pub reason: String,
    pub attempts: usize,
    pub found_points: usize,
    pub expected: usize,
    pub worst_residual: f64,
    pub worst_jacobian_sv: f64,
    pub min_separation: f64,
}

#[derive(Debug)]
pub enum SolveOutcome {
    Certified(LocusSolution),
    Failed(LocusFailure),
}

impl SolveOutcome {
    pub fn certified(self) -> Option<LocusSolution> {
        match self {
            SolveOutcome::Certified(s) => Some(s),
            SolveOutcome::Failed(_) => None,
        }
    }
}

/// theta(x) - x with cached partial derivatives.
struct FixedPointSystem<'a> {
    theta: &'a PolyMap,
    jac: Vec<Vec<Poly>>,
}

impl<'a> FixedPointSystem<'a> {
    fn new(theta: &'a PolyMap) -> Self {
        FixedPointSystem { theta, jac: theta.jacobian() }
    }

    fn n(&self) -> usize {
        self.theta.nvars
    }

    fn eval(&self, x: &[C]) -> Vec<C> {
        let mut f = self.theta.eval(x);
        for (fi, xi) in f.iter_mut().zip(x) {
            *fi -= xi;
        }
        f
    }

    fn jacobian_at(&self, x: &[C]) -> CMat {
        let n = self.n();
        let pows = crate::poly::power_table(x, self.theta.degree.saturating_sub(1));
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.jac[i][j].eval_with(&pows);
                if i == j {
                    m[(i, j)] -= C::new(1.0, 0.0);
                }
            }
        }
        m
    }

    /// Newton iteration toward F = 0; returns the final residual.
    fn newton(&self, x: &mut Vec<C>, tol: f64, iters: usize) -> f64 {
        let mut res;
        for _ in 0..iters {
            let f = self.eval(x);
            res = num::vec_norm(&f);
            if res < tol {
                return res;
            }
            let j = self.jacobian_at(x);
            let Some(dx) = num::solve(&j, &f) else { return res };
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi -= di;
            }
        }
        num::vec_norm(&self.eval(x))
    }
}

/// Exact closed-form locus for a diagonal theta (coordinate powers): each
/// coordinate independently solves x^{kh+1} = x, so the points are all
/// tuples over {0} union the kh-th roots of unity.
pub fn solve_diagonal(g: &ReflectionGroup, k: usize, config: &TrackConfig) -> Result<SolveOutcome> {
    let theta = crate::hsop::diagonal_hsop(g, k)?;
    let kh = k * g.h;
    let n = g.rank;
    let mut per_coord: Vec<C> = vec![C::new(0.0, 0.0)];
    for j in 0..kh {
        let t = std::f64::consts::TAU * j as f64 / kh as f64;
        per_coord.push(C::new(t.cos(), t.sin()));
    }
    let mut points: Vec<Vec<C>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(points.len() * per_coord.len());
        for p in &points {
            for &c in &per_coord {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        points = next;
    }
    certify_and_assemble(g, k, &theta, points, format!("diagonal:{}:k{}", g.spec, k), config, 1)
}

/// Total-degree homotopy solve of theta(x) = x.
pub fn solve_homotopy(
    g: &ReflectionGroup,
    theta: &PolyMap,
    k: usize,
    config: &TrackConfig,
) -> Result<SolveOutcome> {
    let n = g.rank;
    if theta.nvars != n {
        return Err(crate::error::Error::Dimension { expected: n, got: theta.nvars });
    }
    let d = theta.degree;
    if d != k * g.h + 1 {
        return Err(crate::error::Error::invalid(format!(
            "theta degree {d} does not match kh+1 = {}",
            k * g.h + 1
        )));
    }
    let expected = d.pow(n as u32);
    if expected > 4000 {
        return Err(crate::error::Error::config(format!(
            "path budget {expected} exceeds the desk-scale limit"
        )));
    }
    let system = FixedPointSystem::new(theta);
    let mut rng = Rng::new(config.seed ^ 0x706172);
    let mut attempts = 0;
    let mut last_fail = String::new();
    while attempts < config.max_retries {
        attempts += 1;
        let gamma = rng.next_unit_circle() * C::new(1.0 + 0.1 * attempts as f64, 0.0);
        // all D^n start roots, tracked independently
        let starts: Vec<Vec<usize>> = multi_indices(n, d);
        let results: Vec<Option<Vec<C>>> = starts
            .par_iter()
            .map(|idx| {
                let x0: Vec<C> = idx
                    .iter()
                    .map(|&j| {
                        let t = std::f64::consts::TAU * j as f64 / d as f64;
                        C::new(t.cos(), t.sin())
                    })
                    .collect();
                track_path(&system, gamma, x0, d, config)
            })
            .collect();
        if results.iter().any(|r| r.is_none()) {
            last_fail = format!(
                "{} of {} homotopy paths failed to converge",
                results.iter().filter(|r| r.is_none()).count(),
                expected
            );
            continue;
        }
        let points: Vec<Vec<C>> = results.into_iter().map(|r| r.unwrap()).collect();
        let outcome = certify_and_assemble(
            g,
            k,
            theta,
            points,
            format!("homotopy:{}:k{}:seed{}", g.spec, k, config.seed),
            config,
            attempts,
        )?;
        match outcome {
            SolveOutcome::Certified(s) => return Ok(SolveOutcome::Certified(s)),
            SolveOutcome::Failed(f) => {
                last_fail = f.reason.clone();
                if attempts >= config.max_retries {
                    return Ok(SolveOutcome::Failed(f));
                }
            }
        }
    }
    Ok(SolveOutcome::Failed(LocusFailure {
        reason: format!("retry budget exhausted: {last_fail}"),
        attempts,
        found_points: 0,
        expected,
        worst_residual: f64::INFINITY,
        worst_jacobian_sv: 0.0,
        min_separation: 0.0,
    }))
}

fn multi_indices(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * d);
        for p in &out {
            for j in 0..d {
                let mut q = p.clone();
                q.push(j);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Track one path of H(x,t) = (1-t) gamma (x_i^d - 1) + t (theta(x) - x)
/// from t = 0 to t = 1. Euler predictor, Newton corrector, adaptive steps:
/// halve on corrector failure, double after 3 straight accepts.
fn track_path(
    system: &FixedPointSystem,
    gamma: C,
    mut x: Vec<C>,
    d: usize,
    config: &TrackConfig,
) -> Option<Vec<C>> {
    let n = x.len();
    let eval_h = |x: &[C], t: f64| -> Vec<C> {
        let f = system.eval(x);
        let s = 1.0 - t;
        (0..n)
            .map(|i| {
                let start = x[i].powu(d as u32) - C::new(1.0, 0.0);
                gamma * start * C::new(s, 0.0) + f[i] * C::new(t, 0.0)
            })
            .collect()
    };
    let jac_h = |x: &[C], t: f64| -> CMat {
        let mut j = system.jacobian_at(x);
        let s = 1.0 - t;
        for i in 0..n {
            for c in 0..n {
                j[(i, c)] *= C::new(t, 0.0);
            }
            j[(i, i)] += gamma * C::new(s * d as f64, 0.0) * x[i].powu(d as u32 - 1);
        }
        j
    };
    // dH/dt = (theta - x) - gamma (x^d - 1)
    let h_t = |x: &[C]| -> Vec<C> {
        let f = system.eval(x);
        (0..n)
            .map(|i| f[i] - gamma * (x[i].powu(d as u32) - C::new(1.0, 0.0)))
            .collect()
    };
    let mut t = 0.0f64;
    let mut dt = 0.05f64;
    let mut streak = 0usize;
    let mut guard = 0usize;
    while t < 1.0 {
        guard += 1;
        if guard > 100_000 {
            return None;
        }
        let step = dt.min(1.0 - t);
        // Euler predictor
        let j = jac_h(&x, t);
        let ht = h_t(&x);
        let Some(dx) = num::solve(&j, &ht) else { return None };
        let mut xp: Vec<C> = x
            .iter()
            .zip(&dx)
            .map(|(xi, di)| xi - di * C::new(step, 0.0))
            .collect();
        // Newton corrector at t + step
        let tn = t + step;
        let mut ok = false;
        for _ in 0..config.max_newton {
            let h = eval_h(&xp, tn);
            if num::vec_norm(&h) < config.track_tol {
                ok = true;
                break;
            }
            let j = jac_h(&xp, tn);
            let Some(dx) = num::solve(&j, &h) else { break };
            for (xi, di) in xp.iter_mut().zip(&dx) {
                *xi -= di;
            }
        }
        if ok {
            let h = eval_h(&xp, tn);
            ok = num::vec_norm(&h) < config.track_tol;
        }
        if ok {
            x = xp;
            t = tn;
            streak += 1;
            if streak >= 3 {
                dt = (dt * 2.0).min(0.1);
                streak = 0;
            }
        } else {
            dt *= 0.5;
            streak = 0;
            if dt < config.min_step {
                return None;
            }
        }
    }
    Some(x)
}

/// Refine, certify, dedupe-check and build action tables.
fn certify_and_assemble(
    g: &ReflectionGroup,
    k: usize,
    theta: &PolyMap,
    mut points: Vec<Vec<C>>,
    theta_ref: String,
    config: &TrackConfig,
    attempts: usize,
) -> Result<SolveOutcome> {
    let kh = k * g.h;
    let expected = theta.degree.pow(g.rank as u32);
    let system = FixedPointSystem::new(theta);
    let mut worst_residual: f64 = 0.0;
    let mut worst_sv = f64::INFINITY;
    let mut locus_points = Vec::with_capacity(points.len());
    for x in points.iter_mut() {
        let res = system.newton(x, config.endpoint_tol, 60);
        let sv = num::min_singular_value(&system.jacobian_at(x));
        worst_residual = worst_residual.max(res);
        worst_sv = worst_sv.min(sv);
        locus_points.push(LocusPoint {
            coords: x.clone(),
            newton_residual: res,
            jacobian_min_sv: sv,
            origin_flag: num::vec_norm(x) < 1e-10,
        });
    }
    let mut min_sep = f64::INFINITY;
    for i in 0..locus_points.len() {
        for j in i + 1..locus_points.len() {
            min_sep = min_sep.min(num::vec_dist(&locus_points[i].coords, &locus_points[j].coords));
        }
    }
    let fail = |reason: String| {
        Ok(SolveOutcome::Failed(LocusFailure {
            reason,
            attempts,
            found_points: locus_points.len(),
            expected,
            worst_residual,
            worst_jacobian_sv: worst_sv,
            min_separation: min_sep,
        }))
    };
    if locus_points.len() != expected {
        return fail(format!("found {} points, expected {expected}", locus_points.len()));
    }
    if worst_residual > config.endpoint_tol {
        return fail(format!("endpoint residual {worst_residual:.3e} above tolerance"));
    }
    if worst_sv < config.jac_tol {
        return fail(format!(
            "Jacobian of theta - x nearly singular (sigma_min = {worst_sv:.3e}): locus not certified reduced"
        ));
    }
    if min_sep < config.sep_tol {
        return fail(format!("points merge (min separation {min_sep:.3e})"));
    }
    // action tables
    let zeta = C::new((std::f64::consts::TAU / kh as f64).cos(), (std::f64::consts::TAU / kh as f64).sin());
    let match_point = |target: &[C]| -> Option<u32> {
        let mut best = (f64::INFINITY, 0usize);
        let mut second = f64::INFINITY;
        for (i, p) in locus_points.iter().enumerate() {
            let d = num::vec_dist(target, &p.coords);
            if d < best.0 {
                second = best.0;
                best = (d, i);
            } else if d < second {
                second = d;
            }
        }
        if best.0 < config.match_tol && second > config.sep_tol {
            Some(best.1 as u32)
        } else {
            None
        }
    };
    let mut gen_action = Vec::with_capacity(g.simple.len());
    for &s in &g.simple {
        let m = g.matrix(s);
        let mut perm = Vec::with_capacity(locus_points.len());
        for p in &locus_points {
            match match_point(&m.matvec(&p.coords)) {
                Some(i) => perm.push(i),
                None => return fail(format!("action of generator {s} does not close on the locus")),
            }
        }
        gen_action.push(perm);
    }
    let mut g_action = Vec::with_capacity(locus_points.len());
    for p in &locus_points {
        let scaled: Vec<C> = p.coords.iter().map(|z| z * zeta).collect();
        match match_point(&scaled) {
            Some(i) => g_action.push(i),
            None => return fail("rotation action does not close on the locus".into()),
        }
    }
    // close over all of W; identity first, then BFS by left multiplication
    let npts = locus_points.len();
    let mut w_action: Vec<Option<Vec<u32>>> = vec![None; g.order()];
    w_action[0] = Some((0..npts as u32).collect());
    let mut queue = std::collections::VecDeque::from([0 as ElemId]);
    while let Some(u) = queue.pop_front() {
        let base = w_action[u as usize].clone().unwrap();
        for (si, &s) in g.simple.iter().enumerate() {
            let su = g.mult(s, u);
            if w_action[su as usize].is_none() {
                let perm: Vec<u32> =
                    base.iter().map(|&x| gen_action[si][x as usize]).collect();
                w_action[su as usize] = Some(perm);
                queue.push_back(su);
            }
        }
    }
    let w_action: Vec<Vec<u32>> = w_action.into_iter().map(|p| p.unwrap()).collect();
    // closure spot check on random words
    let mut rng = Rng::new(config.seed ^ 0x636c6f);
    for _ in 0..20 {
        let a = rng.next_range(g.order()) as ElemId;
        let b = rng.next_range(g.order()) as ElemId;
        let ab = g.mult(a, b);
        for x in 0..npts as u32 {
            let lhs = w_action[ab as usize][x as usize];
            let rhs = w_action[a as usize][w_action[b as usize][x as usize] as usize];
            if lhs != rhs {
                return fail("action table fails closure spot check".into());
            }
        }
    }
    Ok(SolveOutcome::Certified(LocusSolution {
        k,
        kh,
        expected,
        theta_ref,
        min_separation: min_sep,
        points: locus_points,
        gen_action,
        g_action,
        w_action,
    }))
}

impl LocusSolution {
    /// Count locus points inside X ∩ E(w, zeta^{-d}).
    pub fn subspace_fixed_count(
        &self,
        g: &ReflectionGroup,
        x: FlatId,
        w: ElemId,
        d: i64,
        config: &TrackConfig,
    ) -> usize {
        let e_basis = g.eigenspace_basis(w, -d, self.kh);
        let basis = num::intersection_basis(&g.flat(x).basis, &e_basis, num::RANK_TOL);
        self.points
            .iter()
            .filter(|p| num::dist_to_subspace(&p.coords, &basis) < config.match_tol)
            .count()
    }

    /// Permutation character of the locus action at (w, g^d).
    pub fn character(&self, w: ElemId, d: usize) -> u64 {
        let n = self.points.len() as u32;
        (0..n)
            .filter(|&i| {
                let mut j = i;
                for _ in 0..d % self.kh {
                    j = self.g_action[j as usize];
                }
                self.w_action[w as usize][j as usize] == i
            })
            .count() as u64
    }
}

/// A transported equivariant bijection between two loci, with the path
/// evidence that certifies it.
#[derive(Debug, Serialize)]
pub struct TransportOutcome {
    pub pass: bool,
    pub reason: String,
    /// target index per source index
    pub bijection: Vec<u32>,
    pub min_path_separation: f64,
    pub checkpoints: usize,
    pub detours: usize,
    #[serde(skip)]
    pub traces: Vec<Vec<Vec<C>>>,
}

/// Follow the loci along the straight segment between two certified thetas,
/// checkpointing `steps` times; on trouble, detour through a random sampled
/// midpoint (bounded depth). The resulting endpoint matching must commute
/// with both action tables.
pub fn transport_action(
    g: &ReflectionGroup,
    theta0: &PolyMap,
    sol0: &LocusSolution,
    theta1: &PolyMap,
    sol1: &LocusSolution,
    steps: usize,
    space: &crate::hsop::MapSpace,
    config: &TrackConfig,
) -> Result<TransportOutcome> {
    let start: Vec<Vec<C>> = sol0.points.iter().map(|p| p.coords.clone()).collect();
    let mut rng = Rng::new(config.seed ^ 0x747261);
    let mut detours = 0usize;
    let mut traces: Vec<Vec<Vec<C>>> = start.iter().map(|p| vec![p.clone()]).collect();
    let result = transport_segment(
        g, theta0, theta1, start, steps, space, config, &mut rng, 0, &mut detours, &mut traces,
    );
    let (finals, min_sep) = match result {
        Ok(v) => v,
        Err(reason) => {
            return Ok(TransportOutcome {
                pass: false,
                reason,
                bijection: Vec::new(),
                min_path_separation: 0.0,
                checkpoints: steps,
                detours,
                traces,
            })
        }
    };
    // match endpoints into sol1
    let mut bijection = Vec::with_capacity(finals.len());
    let mut used = vec![false; sol1.points.len()];
    for f in &finals {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, p) in sol1.points.iter().enumerate() {
            let d = num::vec_dist(f, &p.coords);
            if d < best.0 {
                best = (d, i);
            }
        }
        if best.0 > config.match_tol || used[best.1] {
            return Ok(TransportOutcome {
                pass: false,
                reason: format!("endpoint match failed (distance {:.3e})", best.0),
                bijection: Vec::new(),
                min_path_separation: min_sep,
                checkpoints: steps,
                detours,
                traces,
            });
        }
        used[best.1] = true;
        bijection.push(best.1 as u32);
    }
    // equivariance of the transported bijection against both action tables
    let mut ok = true;
    for w in 0..g.order() {
        for x in 0..bijection.len() {
            let lhs = bijection[sol0.w_action[w][x] as usize];
            let rhs = sol1.w_action[w][bijection[x] as usize];
            if lhs != rhs {
                ok = false;
            }
        }
    }
    for x in 0..bijection.len() {
        if bijection[sol0.g_action[x] as usize] != sol1.g_action[bijection[x] as usize] {
            ok = false;
        }
    }
    Ok(TransportOutcome {
        pass: ok,
        reason: if ok { "transport bijection commutes with both actions".into() } else { "transported map is not equivariant".into() },
        bijection,
        min_path_separation: min_sep,
        checkpoints: steps,
        detours,
        traces,
    })
}

#[allow(clippy::too_many_arguments)]
fn transport_segment(
    g: &ReflectionGroup,
    theta_a: &PolyMap,
    theta_b: &PolyMap,
    mut pts: Vec<Vec<C>>,
    steps: usize,
    space: &crate::hsop::MapSpace,
    config: &TrackConfig,
    rng: &mut Rng,
    depth: usize,
    detours: &mut usize,
    traces: &mut Vec<Vec<Vec<C>>>,
) -> std::result::Result<(Vec<Vec<C>>, f64), String> {
    let sys_a = FixedPointSystem::new(theta_a);
    let sys_b = FixedPointSystem::new(theta_b);
    let n = theta_a.nvars;
    let mut min_sep = f64::INFINITY;
    let snapshot = pts.clone();
    let trace_mark: Vec<usize> = traces.iter().map(|t| t.len()).collect();
    let mut failed: Option<String> = None;
    'outer: for j in 1..=steps {
        let t = j as f64 / steps as f64;
        let eval = |x: &[C]| -> Vec<C> {
            let fa = sys_a.eval(x);
            let fb = sys_b.eval(x);
            (0..n).map(|i| fa[i] * C::new(1.0 - t, 0.0) + fb[i] * C::new(t, 0.0)).collect()
        };
        let jac = |x: &[C]| -> CMat {
            let ja = sys_a.jacobian_at(x);
            let jb = sys_b.jacobian_at(x);
            let mut m = CMat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = ja[(r, c)] * C::new(1.0 - t, 0.0) + jb[(r, c)] * C::new(t, 0.0);
                }
            }
            m
        };
        for (pi, x) in pts.iter_mut().enumerate() {
            let mut ok = false;
            for _ in 0..config.max_newton * 3 {
                let h = eval(x);
                if num::vec_norm(&h) < config.track_tol {
                    ok = true;
                    break;
                }
                let jm = jac(x);
                let Some(dx) = num::solve(&jm, &h) else { break };
                for (xi, di) in x.iter_mut().zip(&dx) {
                    *xi -= di;
                }
            }
            // re-certify the corrected point: residual and regularity
            if ok {
                let sv = num::min_singular_value(&jac(x));
                if sv < config.jac_tol {
                    failed = Some(format!(
                        "checkpoint t={t:.4}: Jacobian nearly singular on path {pi}"
                    ));
                    break 'outer;
                }
            } else {
                failed = Some(format!("checkpoint t={t:.4}: Newton failed on path {pi}"));
                break 'outer;
            }
            traces[pi].push(x.clone());
        }
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let d = num::vec_dist(&pts[a], &pts[b]);
                min_sep = min_sep.min(d);
                if d < config.sep_tol {
                    failed = Some(format!("paths merge at t={t:.4} (distance {d:.3e})"));
                    break 'outer;
                }
            }
        }
    }
    match failed {
        None => Ok((pts, min_sep)),
        Some(reason) => {
            if depth >= 5 {
                return Err(format!("{reason}; detour depth exhausted"));
            }
            // random-midpoint detour
            *detours += 1;
            for (tr, &mark) in traces.iter_mut().zip(&trace_mark) {
                tr.truncate(mark);
            }
            let mid = crate::hsop::sample_theta(space, rng.next_u64());
            let (half, sep1) = transport_segment(
                g, theta_a, &mid, snapshot, steps, space, config, rng, depth + 1, detours, traces,
            )?;
            let (full, sep2) = transport_segment(
                g, &mid, theta_b, half, steps, space, config, rng, depth + 1, detours, traces,
            )?;
            Ok((full, sep1.min(sep2)))
        }
    }
}

/// Operational h.s.o.p. verdict: accept iff the homotopy finds the full
/// certified point count.
#[derive(Debug, Serialize)]
pub struct RegularSequenceVerdict {
    pub accept: bool,
    pub detail: String,
}

pub fn regular_sequence_heuristic(
    g: &ReflectionGroup,
    theta: &PolyMap,
    k: usize,
    config: &TrackConfig,
) -> Result<RegularSequenceVerdict> {
    match solve_homotopy(g, theta, k, config)? {
        SolveOutcome::Certified(s) => Ok(RegularSequenceVerdict {
            accept: true,
            detail: format!("{} certified simple fixed points", s.points.len()),
        }),
        SolveOutcome::Failed(f) => {
            Ok(RegularSequenceVerdict { accept: false, detail: f.reason })
        }
    }
}

/// Binary sidecar with per-step coordinates: header (point count, checkpoint
/// count per point, nvars), then little-endian f64 re/im pairs.
pub fn write_trace_sidecar(path: &std::path::Path, traces: &[Vec<Vec<C>>]) -> Result<()> {
    use std::io::Write;
    let mut f = std::fs::File::create(path)?;
    f.write_all(b"PTRC")?;
    f.write_all(&(traces.len() as u64).to_le_bytes())?;
    for t in traces {
        f.write_all(&(t.len() as u64).to_le_bytes())?;
        let nv = t.first().map(|p| p.len()).unwrap_or(0);
        f.write_all(&(nv as u64).to_le_bytes())?;
        for p in t {
            for z in p {
                f.write_all(&z.re.to_le_bytes())?;
                f.write_all(&z.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::hsop;

    fn build(spec: &str) -> ReflectionGroup {
        ReflectionGroup::build(GroupSpec::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_diagonal_matches_paper_set() {
        // {1, zeta, ..., zeta^{2k-1}, 0} with zeta = e^{pi i / k}
        let g = build("A2");
        for k in 1..=4usize {
            let sol = solve_diagonal(&g, k, &TrackConfig::default())
                .unwrap()
                .certified()
                .expect("diagonal locus certifies");
            assert_eq!(sol.points.len(), 2 * k + 1);
            let mut expect: Vec<C> = vec![C::new(0.0, 0.0)];
            for j in 0..2 * k {
                let t = std::f64::consts::PI * j as f64 / k as f64;
                expect.push(C::new(t.cos(), t.sin()));
            }
            for e in &expect {
                assert!(
                    sol.points.iter().any(|p| (p.coords[0] - e).norm() < 1e-10),
                    "missing point {e} at k={k}"
                );
            }
        }
    }

    #[test]
    fn diagonal_b2_and_i2_counts() {
        let sol = solve_diagonal(&build("B2"), 1, &TrackConfig::default())
            .unwrap()
            .certified()
            .unwrap();
        assert_eq!(sol.points.len(), 25);
        // all coordinates are 0 or 4th roots of unity
        for p in &sol.points {
            for z in &p.coords {
                let n = z.norm();
                assert!(n < 1e-12 || (n - 1.0).abs() < 1e-12);
            }
        }
        let sol = solve_diagonal(&build("I2:5"), 1, &TrackConfig::default())
            .unwrap()
            .certified()
            .unwrap();
        assert_eq!(sol.points.len(), 36);
    }

    #[test]
    fn homotopy_agrees_with_diagonal_on_b2() {
        let g = build("B2");
        let theta = hsop::diagonal_hsop(&g, 1).unwrap();
        let config = TrackConfig { seed: 5, ..Default::default() };
        let hom = solve_homotopy(&g, &theta, 1, &config).unwrap().certified().unwrap();
        let diag = solve_diagonal(&g, 1, &config).unwrap().certified().unwrap();
        assert_eq!(hom.points.len(), diag.points.len());
        for p in &hom.points {
            let d = diag
                .points
                .iter()
                .map(|q| num::vec_dist(&p.coords, &q.coords))
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10, "homotopy point missing from closed form (dist {d:.2e})");
        }
    }

    #[test]
    fn sampled_theta_solves_for_s3() {
        let g = build("A3");
        let space = hsop::hom_basis(&g, 1).unwrap();
        let theta = hsop::sample_theta(&space, 7);
        let config = TrackConfig { seed: 7, ..Default::default() };
        let sol = solve_homotopy(&g, &theta, 1, &config).unwrap().certified().unwrap();
        assert_eq!(sol.points.len(), 16);
        for p in &sol.points {
            assert!(p.newton_residual < 1e-12);
            assert!(p.jacobian_min_sv > 1e-6);
        }
        assert!(sol.points.iter().filter(|p| p.origin_flag).count() == 1);
        // the locus character matches the prediction on every (class, d)
        for class in g.conjugacy_classes() {
            for d in 0..sol.kh {
                assert_eq!(
                    sol.character(class[0], d),
                    crate::characters::predicted_character(&g, 1, class[0], d as i64)
                );
            }
        }
        // g-orbit sizes divide kh
        let mut seen = vec![false; sol.points.len()];
        for i in 0..sol.points.len() {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i as u32;
            loop {
                seen[j as usize] = true;
                len += 1;
                j = sol.g_action[j as usize];
                if j == i as u32 {
                    break;
                }
            }
            assert_eq!(sol.kh % len, 0);
        }
    }

    #[test]
    fn zero_map_rejected() {
        let g = build("B2");
        let theta = crate::poly::PolyMap::zero(2, 5);
        let v = regular_sequence_heuristic(&g, &theta, 1, &TrackConfig::default()).unwrap();
        assert!(!v.accept);
    }

    #[test]
    fn subspace_counts_on_diagonal_b2() {
        let g = build("B2");
        let config = TrackConfig::default();
        let sol = solve_diagonal(&g, 1, &config).unwrap().certified().unwrap();
        // X = V, w = e, d = kh: all points
        assert_eq!(sol.subspace_fixed_count(&g, g.full_flat(), 0, 4, &config), 25);
        // hyperplane x_1 = 0: flat from the sign flip on coordinate 1
        let flip1 = g
            .elem_id(&crate::group::element::Elem::Signed { perm: vec![0, 1], flip: 0b01 })
            .unwrap();
        let x = g.fixed_space(flip1);
        assert_eq!(g.flat(x).dim, 1);
        assert_eq!(sol.subspace_fixed_count(&g, x, 0, 4, &config), 5);
    }

    #[test]
    fn transport_identity_is_identity() {
        let g = build("A3");
        let space = hsop::hom_basis(&g, 1).unwrap();
        let theta = hsop::sample_theta(&space, 3);
        let config = TrackConfig { seed: 3, ..Default::default() };
        let sol = solve_homotopy(&g, &theta, 1, &config).unwrap().certified().unwrap();
        let out =
            transport_action(&g, &theta, &sol, &theta, &sol, 16, &space, &config).unwrap();
        assert!(out.pass);
        assert!(out.bijection.iter().enumerate().all(|(i, &j)| i as u32 == j));
    }

    #[test]
    fn transport_diagonal_to_perturbed_diagonal_b2() {
        // one basis coefficient pushed off the real axis; orbit structure
        // must survive the segment
        let g = build("B2");
        let space = hsop::hom_basis(&g, 1).unwrap();
        let theta0 = hsop::diagonal_hsop(&g, 1).unwrap();
        let mut theta1 = theta0.clone();
        theta1.add_assign(&space.basis[1].scale(C::new(0.0, 0.1)));
        let config = TrackConfig { seed: 4, ..Default::default() };
        let s0 = solve_homotopy(&g, &theta0, 1, &config).unwrap().certified().unwrap();
        let s1 = solve_homotopy(&g, &theta1, 1, &config).unwrap().certified().unwrap();
        let out = transport_action(&g, &theta0, &s0, &theta1, &s1, 64, &space, &config).unwrap();
        assert!(out.pass, "{}", out.reason);
        // orbit structure preserved: transported g-orbit sizes match
        let orbit_sizes = |sol: &LocusSolution| {
            let mut seen = vec![false; sol.points.len()];
            let mut sizes = Vec::new();
            for i in 0..sol.points.len() as u32 {
                if seen[i as usize] {
                    continue;
                }
                let mut len = 0;
                let mut j = i;
                loop {
                    seen[j as usize] = true;
                    len += 1;
                    j = sol.g_action[j as usize];
                    if j == i {
                        break;
                    }
                }
                sizes.push(len);
            }
            sizes.sort_unstable();
            sizes
        };
        assert_eq!(orbit_sizes(&s0), orbit_sizes(&s1));
    }

    #[test]
    fn generic_theta_accepted_over_many_seeds() {
        // statistical smoke test: sampled maps are h.s.o.p.'s with
        // overwhelming frequency
        let g = build("B2");
        let space = hsop::hom_basis(&g, 1).unwrap();
        let mut accepted = 0;
        for seed in 0..20u64 {
            let theta = hsop::sample_theta(&space, seed);
            let config = TrackConfig { seed, ..Default::default() };
            if regular_sequence_heuristic(&g, &theta, 1, &config).unwrap().accept {
                accepted += 1;
            }
        }
        assert!(accepted >= 19, "only {accepted}/20 sampled maps accepted");
    }

    #[test]
    fn transport_between_two_seeds() {
        let g = build("A3");
        let space = hsop::hom_basis(&g, 1).unwrap();
        let t0 = hsop::sample_theta(&space, 100);
        let t1 = hsop::sample_theta(&space, 200);
        let config = TrackConfig { seed: 9, ..Default::default() };
        let s0 = solve_homotopy(&g, &t0, 1, &config).unwrap().certified().unwrap();
        let s1 = solve_homotopy(&g, &t1, 1, &config).unwrap().certified().unwrap();
        let out = transport_action(&g, &t0, &s0, &t1, &s1, 64, &space, &config).unwrap();
        assert!(out.pass, "{}", out.reason);
        assert!(out.min_path_separation > 1e-6);
    }
}
