//! Brute-force checks that share as little code as possible with the
//! spectral path, plus an exhaustive small-graph sweep.
//!
//! The discriminating-root search works on the bordered Gram matrix
//! `X̃(t)_ij = D₀ᵢ + D₀ⱼ − Dᵢⱼ` (indices `1..n`) of `D(t) = A + tĀ`, which is
//! congruent to `−VᵀD(t)V` without ever forming `V`, and uses nalgebra's
//! eigensolver rather than the crate's Jacobi routine.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centering::VScheme;
use crate::edm::{Centering, Configuration};
use crate::error::{Error, Result};
use crate::graphs::{encode_graph6, Graph};
use crate::linalg::{eigenvalues, Tolerances};
use crate::representations::GraphAnalysis;

/// Largest order swept exhaustively.
pub const EXHAUSTIVE_MAX_ORDER: usize = 6;
/// Largest order accepted by [`invariant_sweep`].
pub const SWEEP_MAX_ORDER: usize = 8;

/// Tolerance for the constructive distance checks.
pub const CONSTRUCTIVE_TOL: f64 = 1e-7;
/// Tolerance for unit-norm rows of J-spherical configurations.
pub const UNIT_NORM_TOL: f64 = 1e-8;
/// Tolerance for agreement between independently computed radii and roots.
pub const AGREEMENT_TOL: f64 = 1e-7;

const BISECTION_TOL: f64 = 1e-12;
const ROOT_SEARCH_CAP: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Clustered squared distances as `(mean value, pair count)`, increasing.
    pub distinct_sq_distances: Vec<(f64, usize)>,
    /// Largest `|‖pⁱ − pʲ‖² − target|` with target `α` on edges, `β` otherwise.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Checks that `config` realises `g` with squared distances `alpha` on edges
/// and `beta` on non-edges.
pub fn verify_two_distance(config: &Configuration, g: &Graph, alpha: f64, beta: f64, tol: f64) -> VerificationReport {
    let n = g.order();
    if config.len() != n {
        return VerificationReport {
            distinct_sq_distances: Vec::new(),
            max_deviation: f64::INFINITY,
            pass: false,
        };
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    let mut max_deviation: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = config.squared_distance(i, j);
            let target = if g.has_edge(i, j) { alpha } else { beta };
            max_deviation = max_deviation.max((d - target).abs());
            values.push(d);
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        max_deviation = f64::INFINITY;
    }
    values.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for v in values {
        match clusters.last_mut() {
            Some((sum, count)) if v - last <= tol => {
                *sum += v;
                *count += 1;
            }
            _ => clusters.push((v, 1)),
        }
        last = v;
    }
    let distinct_sq_distances: Vec<_> = clusters.into_iter().map(|(s, c)| (s / c as f64, c)).collect();
    let pass = distinct_sq_distances.len() == 2 && max_deviation <= tol;
    VerificationReport {
        distinct_sq_distances,
        max_deviation,
        pass,
    }
}

/// `X̃(t)` for `D(t) = A + tĀ`, of order `n − 1`.
pub fn bordered_gram(g: &Graph, t: f64) -> DMatrix<f64> {
    let n = g.order();
    let d = |i: usize, j: usize| match (i == j, g.has_edge(i, j)) {
        (true, _) => 0.0,
        (false, true) => 1.0,
        (false, false) => t,
    };
    DMatrix::from_fn(n - 1, n - 1, |i, j| d(0, i + 1) + d(0, j + 1) - d(i + 1, j + 1))
}

fn bordered_eigenvalues(g: &Graph, t: f64) -> Vec<f64> {
    SymmetricEigen::new(bordered_gram(g, t)).eigenvalues.iter().copied().collect()
}

fn min_eigenvalue(g: &Graph, t: f64) -> f64 {
    bordered_eigenvalues(g, t).into_iter().fold(f64::INFINITY, f64::min)
}

/// Threshold below which `λ_min(X̃(t))` counts as negative.
fn negativity_threshold(g: &Graph, t: f64) -> f64 {
    1e-9 * (g.order() as f64) * t.max(1.0)
}

fn bisect(g: &Graph, mut neg: f64, mut pos: f64) -> f64 {
    while (pos - neg).abs() > BISECTION_TOL {
        let mid = 0.5 * (neg + pos);
        if min_eigenvalue(g, mid) < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
    }
    0.5 * (neg + pos)
}

/// Roots of `det X̃(t)` adjacent to `t = 1`: the largest in `(0, 1)` and the
/// smallest above 1, each if it exists.
///
/// `λ_min(X̃(t))` is concave in `t` and positive at `t = 1`, so each root is
/// found by bisection once a negative value has been bracketed.
pub fn discriminating_roots(g: &Graph) -> Result<(Option<f64>, Option<f64>)> {
    if g.order() < 2 || g.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let t1 = (min_eigenvalue(g, 0.0) < -negativity_threshold(g, 0.0)).then(|| bisect(g, 0.0, 1.0));
    let mut hi = 2.0;
    let t2 = loop {
        if min_eigenvalue(g, hi) < -negativity_threshold(g, hi) {
            break Some(bisect(g, hi, 1.0));
        }
        if hi >= ROOT_SEARCH_CAP {
            break None;
        }
        hi *= 2.0;
    };
    Ok((t1, t2))
}

fn bordered_rank(g: &Graph, t: f64, tol: f64) -> Option<usize> {
    let values = bordered_eigenvalues(g, t);
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let thr = tol * scale;
    if values.iter().any(|&v| v < -thr) {
        return None;
    }
    Some(values.iter().filter(|&&v| v > thr).count())
}

/// Minimum rank of `X̃(t)` over the feasible `t` among the discriminating
/// roots and a grid of `points` interior values, with the `t` achieving it.
pub fn min_rank_search(g: &Graph, points: usize, tol: f64) -> Result<(usize, f64)> {
    let (t1, t2) = discriminating_roots(g)?;
    let lo = t1.unwrap_or(0.0);
    let hi = t2.unwrap_or(10.0);
    let below = points / 2;
    let above = points - below;
    let mut candidates: Vec<f64> = t1.into_iter().chain(t2).collect();
    candidates.extend((1..=below).map(|k| lo + (1.0 - lo) * k as f64 / (below + 1) as f64));
    candidates.extend((1..=above).map(|k| 1.0 + (hi - 1.0) * k as f64 / (above + 1) as f64));
    candidates
        .into_iter()
        .filter_map(|t| bordered_rank(g, t, tol).map(|r| (r, t)))
        .min_by_key(|&(r, _)| r)
        .ok_or_else(|| Error::Inconsistent("no feasible t found".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub graph6: String,
    pub n: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckCount {
    pub evaluated: usize,
    pub violations: usize,
}

/// Outcome of checking one graph.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphCheck {
    pub counts: BTreeMap<&'static str, (usize, usize)>,
    /// First failing check with details.
    pub failure: Option<(&'static str, String)>,
}

impl GraphCheck {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let c = self.counts.entry(name).or_default();
        c.0 += 1;
        if !ok {
            c.1 += 1;
            if self.failure.is_none() {
                self.failure = Some((name, detail()));
            }
        }
    }

    fn ok<T>(&mut self, name: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, || format!("error: {e}"));
                None
            }
        }
    }

    pub fn violations(&self) -> usize {
        self.counts.values().map(|c| c.1).sum()
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn spectral_checks(c: &mut GraphCheck, g: &Graph, ga: &GraphAnalysis, co: &GraphAnalysis) {
    let ps = &ga.ps;
    let cps = &co.ps;
    let t = ga.tol().eig * 10.0;
    c.check(
        "complement_spectrum",
        close(cps.mu_min, -1.0 - ps.mu_max, t)
            && close(cps.mu_max, -1.0 - ps.mu_min, t)
            && cps.m_min == ps.m_max
            && cps.m_max == ps.m_min,
        || format!("mu = ({}, {}), complement mu = ({}, {})", ps.mu_min, ps.mu_max, cps.mu_min, cps.mu_max),
    );
    let is_null = g.is_null();
    if !is_null {
        c.check("mu_min_at_most_minus_one", ps.mu_min <= -1.0 + t, || format!("mu_min = {}", ps.mu_min));
        c.check(
            "cluster_iff_mu_min",
            close(ps.mu_min, -1.0, t) == ga.class.is_cluster,
            || format!("mu_min = {}, cluster = {}", ps.mu_min, ga.class.is_cluster),
        );
        c.check("trace_forces_negative_mu_min", ps.mu_min < 0.0, || format!("mu_min = {}", ps.mu_min));
    }
    c.check(
        "multipartite_iff_mu_max",
        (ps.mu_max <= t) == ga.class.is_multipartite,
        || format!("mu_max = {}, multipartite = {}", ps.mu_max, ga.class.is_multipartite),
    );
    c.check(
        "no_graph_with_mu_max_zero_and_mu_min_minus_one",
        !(close(ps.mu_max, 0.0, t) && close(ps.mu_min, -1.0, t)),
        || format!("mu = ({}, {})", ps.mu_min, ps.mu_max),
    );
    if let Some(lam) = c.ok("interlacing", eigenvalues(&ga.a)) {
        let n = lam.len();
        let s = 1e-9 * lam[0].abs().max(1.0);
        let ok = lam[0] + s >= ps.mu_max
            && ps.mu_max + s >= lam[1]
            && lam[n - 2] + s >= ps.mu_min
            && ps.mu_min + s >= lam[n - 1];
        c.check("interlacing", ok, || format!("spectrum(A) = {lam:?}, mu = ({}, {})", ps.mu_min, ps.mu_max));
    }
    if g.order() >= 4 {
        if let Some(block) = c.ok("basis_independence", GraphAnalysis::with_scheme(g, *ga.tol(), VScheme::Block)) {
            let (a, b) = (ga.ps.spectrum.values(), block.ps.spectrum.values());
            let ok = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| close(*x, *y, t));
            c.check("basis_independence", ok, || format!("dense {a:?} vs block {b:?}"));
        }
    }
}

fn constructive_check(c: &mut GraphCheck, ga: &GraphAnalysis, beta: f64, expected_rank: usize, label: &str) {
    let g = &ga.graph;
    if let Some(rep) = c.ok("constructive_euclidean", ga.euclidean_representation(beta)) {
        c.check("euclidean_rank", rep.rank == expected_rank && rep.config.dim() == rep.rank, || {
            format!("{label} beta = {beta}: rank {} (dim {}), expected {expected_rank}", rep.rank, rep.config.dim())
        });
        let v = verify_two_distance(&rep.config, g, 1.0, beta, CONSTRUCTIVE_TOL);
        c.check("constructive_euclidean", v.pass, || format!("{label} beta = {beta}: {v:?}"));
    }
}

fn representation_checks(c: &mut GraphCheck, ga: &GraphAnalysis, co: &GraphAnalysis) {
    let g = &ga.graph;
    let n = g.order();
    let Some(report) = c.ok("report", ga.report()) else { return };
    let Some(co_report) = c.ok("report", co.report()) else { return };

    c.check(
        "dim_chain",
        report.dim_e <= report.dim_s && report.dim_s <= report.dim_j,
        || format!("dims ({}, {}, {})", report.dim_e, report.dim_s, report.dim_j),
    );
    c.check("dim_e_at_most_n_minus_2", report.dim_e + 2 <= n, || format!("dim_e = {}", report.dim_e));
    c.check(
        "lower_bounds",
        report.dim_e as f64 >= report.lower_bound_e - 1e-12 && report.dim_s as f64 >= report.lower_bound_s - 1e-12,
        || format!("dims ({}, {}), bounds ({}, {})", report.dim_e, report.dim_s, report.lower_bound_e, report.lower_bound_s),
    );
    if n >= 3 {
        c.check("complement_dim_e", report.dim_e == co_report.dim_e, || {
            format!("{} vs complement {}", report.dim_e, co_report.dim_e)
        });
        c.check("complement_dim_s", report.dim_s == co_report.dim_s, || {
            format!("{} vs complement {}", report.dim_s, co_report.dim_s)
        });
    }
    c.check(
        "endpoint_duality",
        report.beta_l.is_some() == co_report.beta_u.is_some() && report.spherical_at_l == co_report.spherical_at_u,
        || {
            format!(
                "lower ({:?}, {}) vs complement upper ({:?}, {})",
                report.beta_l, report.spherical_at_l, co_report.beta_u, co_report.spherical_at_u
            )
        },
    );
    if let (Some(bl), Some(rho), Some(rho_bar)) = (report.beta_l, report.rho_l, co_report.rho_u) {
        c.check("complement_radius", close(rho_bar * rho_bar, rho * rho / bl, AGREEMENT_TOL), || {
            format!("rho_l^2 / beta_l = {}, complement rho_u^2 = {}", rho * rho / bl, rho_bar * rho_bar)
        });
    }

    // discriminating roots against the endpoint formulas
    if let Some((t1, t2)) = c.ok("discriminating_roots", discriminating_roots(g)) {
        let agree = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => close(x, y, AGREEMENT_TOL),
            (None, None) => true,
            _ => false,
        };
        c.check("discriminating_roots", agree(t1, report.beta_l) && agree(t2, report.beta_u), || {
            format!("roots ({t1:?}, {t2:?}) vs endpoints ({:?}, {:?})", report.beta_l, report.beta_u)
        });
    }

    // constructive verification
    if let Some(bl) = report.beta_l {
        constructive_check(c, ga, bl, n - 1 - report.m_max, "lower");
    }
    if let Some(bu) = report.beta_u {
        constructive_check(c, ga, bu, n - 1 - report.m_min, "upper");
    }
    constructive_check(c, ga, ga.interior_beta(), n - 1, "interior");

    let d = ga.two_distance_matrix(report.dim_s_beta);
    if let Some(cfg) = c.ok("constructive_spherical", ga.ctx.recover_configuration(&d, Centering::Circumcenter)) {
        let v = verify_two_distance(&cfg, g, 1.0, report.dim_s_beta, CONSTRUCTIVE_TOL);
        let on_sphere = cfg
            .points
            .row_iter()
            .all(|r| close(r.norm(), report.dim_s_rho, CONSTRUCTIVE_TOL));
        c.check("constructive_spherical", v.pass && on_sphere && cfg.dim() == report.dim_s, || {
            format!("beta = {}, dim {} vs {}, on sphere {on_sphere}: {v:?}", report.dim_s_beta, cfg.dim(), report.dim_s)
        });
    }

    if let Some(j) = c.ok("constructive_j_spherical", ga.j_spherical()) {
        let v = verify_two_distance(&j.config, g, 2.0, j.beta, CONSTRUCTIVE_TOL);
        c.check("constructive_j_spherical", v.pass && j.config.dim() == j.dim_j, || {
            format!("beta = {}, dim {}: {v:?}", j.beta, j.config.dim())
        });
        let worst = j
            .config
            .points
            .row_iter()
            .map(|r| (r.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        c.check("j_spherical_unit_rows", worst <= UNIT_NORM_TOL, || format!("max | |p| - 1 | = {worst:e}"));
    }

    // radius at the upper endpoint by three routes
    if report.spherical_at_u {
        let info = report.beta_u.map(|b| ga.sphere_at(b));
        if let (Some(rho_cf), Some(Ok(Some(info)))) = (c.ok("radius_consistency", ga.radius_at_beta_u_closed_form()), info) {
            let (a, b, r) = (rho_cf * rho_cf, info.radius * info.radius, info.radius_from_center.powi(2));
            c.check("radius_consistency", close(a, b, AGREEMENT_TOL) && close(a, r, AGREEMENT_TOL), || {
                format!("closed form {a}, 1/(2 e'w) {b}, center-based {r}")
            });
        } else {
            c.check("radius_consistency", false, || "spherical_info disagrees with endpoint sphericity".into());
        }
    }
}

/// Runs every invariant on one graph.
pub fn check_graph(g: &Graph, tol: Tolerances) -> GraphCheck {
    let mut c = GraphCheck::default();
    let co_graph = g.complement();
    let (Some(ga), Some(co)) = (
        c.ok("analysis", GraphAnalysis::new(g, tol)),
        c.ok("analysis", GraphAnalysis::new(&co_graph, tol)),
    ) else {
        return c;
    };
    spectral_checks(&mut c, g, &ga, &co);
    if g.is_degenerate() {
        c.check("degenerate_rejected", matches!(ga.report(), Err(Error::Degenerate)), || {
            "degenerate graph produced a report".into()
        });
    } else {
        representation_checks(&mut c, &ga, &co);
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub graphs: usize,
    /// Keyed by order.
    pub graphs_per_order: BTreeMap<usize, usize>,
    pub checks: BTreeMap<String, CheckCount>,
    pub violations: usize,
    pub counterexample: Option<Counterexample>,
    pub elapsed_seconds: f64,
    pub pass: bool,
}

#[derive(Default)]
struct Tally {
    graphs_per_order: BTreeMap<usize, usize>,
    checks: BTreeMap<&'static str, (usize, usize)>,
    /// `(sort key, counterexample)`; the smallest key wins so the result does
    /// not depend on scheduling.
    first: Option<((usize, u64), Counterexample)>,
}

impl Tally {
    fn single(key: (usize, u64), g: &Graph, check: GraphCheck) -> Self {
        let mut t = Tally::default();
        t.graphs_per_order.insert(g.order(), 1);
        t.checks = check.counts;
        t.first = check.failure.map(|(name, detail)| {
            let cx = Counterexample {
                graph6: encode_graph6(g).unwrap_or_default(),
                n: g.order(),
                check: name.to_string(),
                detail,
            };
            (key, cx)
        });
        t
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.graphs_per_order {
            *self.graphs_per_order.entry(k).or_default() += v;
        }
        for (k, (e, f)) in other.checks {
            let c = self.checks.entry(k).or_default();
            c.0 += e;
            c.1 += f;
        }
        self.first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Random labeled graph with edge probability 1/2.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::empty(n);
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.5) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// The `i`-th sampled graph of a sweep: order 7 for even `i`, 8 for odd.
pub fn sample_graph(seed: u64, i: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    random_graph(7 + (i % 2) as usize, &mut rng)
}

/// Exhaustive sweep over all labeled graphs on `2..=min(n_max, 6)` nodes,
/// plus `samples` random graphs alternating between 7 and 8 nodes when
/// `n_max >= 7`.
pub fn invariant_sweep(n_max: usize, samples: usize, seed: u64, tol: Tolerances) -> Result<SweepSummary> {
    if n_max > SWEEP_MAX_ORDER {
        return Err(Error::InvalidInput(format!("n_max too large: {n_max} > {SWEEP_MAX_ORDER}")));
    }
    let start = Instant::now();
    let mut tally = Tally::default();
    for n in 2..=n_max.min(EXHAUSTIVE_MAX_ORDER) {
        let pairs = n * (n - 1) / 2;
        let t = (0..1u64 << pairs)
            .into_par_iter()
            .map(|bits| {
                let g = Graph::from_pair_bits(n, bits);
                Tally::single((n, bits), &g, check_graph(&g, tol))
            })
            .reduce(Tally::default, Tally::merge);
        tally = tally.merge(t);
    }
    if n_max > EXHAUSTIVE_MAX_ORDER {
        let t = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let g = sample_graph(seed, i);
                Tally::single((usize::MAX, i), &g, check_graph(&g, tol))
            })
            .reduce(Tally::default, Tally::merge);
        tally = tally.merge(t);
    }
    let checks: BTreeMap<String, CheckCount> = tally
        .checks
        .into_iter()
        .map(|(k, (evaluated, violations))| (k.to_string(), CheckCount { evaluated, violations }))
        .collect();
    let violations = checks.values().map(|c| c.violations).sum();
    Ok(SweepSummary {
        n_max,
        samples: if n_max > EXHAUSTIVE_MAX_ORDER { samples } else { 0 },
        seed,
        graphs: tally.graphs_per_order.values().sum(),
        graphs_per_order: tally.graphs_per_order,
        checks,
        violations,
        counterexample: tally.first.map(|(_, cx)| cx),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        pass: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_edge_list;
    use crate::representations::GraphAnalysis;

    fn bow_tie() -> Graph {
        parse_edge_list("5\n0 1\n0 2\n0 3\n0 4\n1 3\n2 4").unwrap()
    }

    fn pentagon(side_sq: f64) -> Configuration {
        let r = (side_sq / (2.0 - 2.0 * (0.4 * std::f64::consts::PI).cos())).sqrt();
        let points = DMatrix::from_fn(5, 2, |i, k| {
            let a = 0.4 * std::f64::consts::PI * i as f64;
            r * if k == 0 { a.cos() } else { a.sin() }
        });
        Configuration {
            points,
            centering: Centering::Centroid,
        }
    }

    #[test]
    fn analytic_pentagon_passes() {
        // sides of length² β_l make the diagonals unit length
        let bl = (3.0 - 5f64.sqrt()) / 2.0;
        let cfg = pentagon(bl);
        let v = verify_two_distance(&cfg, &Graph::cycle(5).complement(), 1.0, bl, 1e-9);
        assert!(v.pass, "{v:?}");
        let cfg = pentagon(1.0);
        let v = verify_two_distance(&cfg, &Graph::cycle(5), 1.0, 1.0 / bl, 1e-9);
        assert!(v.pass, "{v:?}");
        assert_eq!(v.distinct_sq_distances.len(), 2);
        assert_eq!(v.distinct_sq_distances[0].1, 5);
    }

    #[test]
    fn emitted_pentagon_and_j_spherical_pass() {
        let ga = GraphAnalysis::new(&Graph::cycle(5), Tolerances::default()).unwrap();
        let bl = ga.beta_l().unwrap();
        let rep = ga.euclidean_representation(bl).unwrap();
        let v = verify_two_distance(&rep.config, &Graph::cycle(5), 1.0, bl, 1e-9);
        assert!(v.pass);
        assert!((v.distinct_sq_distances[0].0 - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!((v.distinct_sq_distances[1].0 - 1.0).abs() < 1e-9);

        let j = ga.j_spherical().unwrap();
        let v = verify_two_distance(&j.config, &Graph::cycle(5), 2.0, 3.0, 1e-9);
        assert!(v.pass);
        assert!((v.distinct_sq_distances[0].0 - 2.0).abs() < 1e-9);
        assert!((v.distinct_sq_distances[1].0 - 3.0).abs() < 1e-9);
    }

    #[test]
    fn perturbed_configuration_fails() {
        let ga = GraphAnalysis::new(&Graph::cycle(5), Tolerances::default()).unwrap();
        let mut cfg = ga.j_spherical().unwrap().config;
        cfg.points[(2, 1)] += 0.1;
        let v = verify_two_distance(&cfg, &Graph::cycle(5), 2.0, 3.0, 1e-7);
        assert!(!v.pass);
        assert!(v.max_deviation > 1e-7);
    }

    #[test]
    fn wrong_row_count_fails() {
        let cfg = pentagon(1.0);
        assert!(!verify_two_distance(&cfg, &Graph::cycle(6), 1.0, 2.0, 1e-7).pass);
    }

    #[test]
    fn roots_c5_and_bow_tie() {
        let r5 = 5f64.sqrt();
        let (t1, t2) = discriminating_roots(&Graph::cycle(5)).unwrap();
        assert!((t1.unwrap() - (3.0 - r5) / 2.0).abs() < 1e-10);
        assert!((t2.unwrap() - (3.0 + r5) / 2.0).abs() < 1e-10);
        let (t1, t2) = discriminating_roots(&bow_tie()).unwrap();
        assert!((t1.unwrap() - 0.5).abs() < 1e-10);
        assert!((t2.unwrap() - 3.5).abs() < 1e-10);
    }

    #[test]
    fn roots_cluster_and_multipartite() {
        let g = Graph::disjoint_union(&[Graph::complete(2), Graph::complete(3)]);
        let (t1, t2) = discriminating_roots(&g).unwrap();
        assert!(t1.is_some());
        assert_eq!(t2, None);
        for k in 1..100 {
            let t = 1.0 + k as f64;
            assert!(min_eigenvalue(&g, t) > 0.0);
        }
        let (t1, t2) = discriminating_roots(&g.complement()).unwrap();
        assert_eq!(t1, None);
        assert!(t2.is_some());
        assert_eq!(discriminating_roots(&Graph::complete(4)), Err(Error::Degenerate));
    }

    #[test]
    fn bordered_gram_at_one_is_i_plus_e() {
        let x = bordered_gram(&Graph::cycle(6), 1.0);
        let expected = DMatrix::from_fn(5, 5, |i, j| if i == j { 2.0 } else { 1.0 });
        assert_eq!(x, expected);
    }

    #[test]
    fn min_rank_matches_dim_e() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 200 {
            let n = rng.gen_range(3..=7);
            let g = random_graph(n, &mut rng);
            if g.is_degenerate() {
                continue;
            }
            let ga = GraphAnalysis::new(&g, Tolerances::default()).unwrap();
            let (r, _) = ga.dim_euclidean().unwrap();
            let (rank, _) = min_rank_search(&g, 50, 1e-9).unwrap();
            assert_eq!(rank, r, "{}", encode_graph6(&g).unwrap());
            done += 1;
        }
    }

    #[test]
    fn known_graphs_have_no_violations() {
        let graphs = [
            Graph::cycle(5),
            bow_tie(),
            Graph::complete_multipartite(&[2, 3]),
            Graph::complete(4),
            Graph::empty(3),
            Graph::disjoint_union(&[Graph::complete(2), Graph::complete(2), Graph::complete(2)]),
        ];
        for g in graphs {
            let c = check_graph(&g, Tolerances::default());
            assert_eq!(c.violations(), 0, "{:?}", c.failure);
        }
    }

    #[test]
    fn sweep_order_four() {
        let s = invariant_sweep(4, 0, 0, Tolerances::default()).unwrap();
        assert_eq!(s.graphs, 74);
        assert_eq!(s.graphs_per_order.get(&4), Some(&64));
        assert!(s.pass, "{:?}", s.counterexample);
        assert!(s.checks["discriminating_roots"].evaluated > 0);
    }

    #[test]
    fn sweep_rejects_large_order() {
        assert!(matches!(invariant_sweep(9, 0, 0, Tolerances::default()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(sample_graph(5, 3), sample_graph(5, 3));
        assert_eq!(sample_graph(5, 2).order(), 7);
        assert_eq!(sample_graph(5, 3).order(), 8);
    }
}
