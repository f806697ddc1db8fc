//! Exact angular discrepancy of a root-angle multiset, a brute-force grid
//! oracle, bound reports against the constant ladder, and the real-root
//! corollary.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::constants;
use crate::error::{Error, Result};
use crate::heights::{height_big_h_from_roots, height_h_from_roots};
use crate::polynomial::{angle_distance, find_roots, normalize_angle, ComplexPolynomial, RootSet};

/// An arc on ℝ/ℤ; wrap-around allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleInterval {
    /// Start angle in [0, 1).
    pub start: f64,
    /// Arc length in [0, 1].
    pub length: f64,
}

/// Which one-sided supremum the witness arc attains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// N(I) - |I|N at a closed arc.
    Excess,
    /// |I|N - N(I) at an open arc.
    Deficit,
}

/// The discrepancy value together with an arc attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub witness: CircleInterval,
    pub side: Side,
}

/// Sorted unique angles with multiplicities and prefix counts.
struct Sorted {
    angles: Vec<f64>,
    prefix: Vec<usize>, // prefix[i] = total count of angles[0..=i]
    n: usize,
}

fn sort_angles(angles: &[f64]) -> Sorted {
    let mut a: Vec<f64> = angles.iter().map(|&t| normalize_angle(t)).collect();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut uniq = Vec::with_capacity(a.len());
    let mut counts: Vec<usize> = Vec::with_capacity(a.len());
    for &t in &a {
        if uniq.last() == Some(&t) {
            *counts.last_mut().unwrap() += 1;
        } else {
            uniq.push(t);
            counts.push(1);
        }
    }
    let mut prefix = counts.clone();
    for i in 1..prefix.len() {
        prefix[i] += prefix[i - 1];
    }
    Sorted {
        angles: uniq,
        prefix,
        n: a.len(),
    }
}

impl Sorted {
    fn count_closed(&self, a: usize, b: usize) -> usize {
        // Points in the closed arc from angle a (inclusive) CCW to b (inclusive).
        let below = |i: usize| if i == 0 { 0 } else { self.prefix[i - 1] };
        if a <= b {
            self.prefix[b] - below(a)
        } else {
            (self.prefix[self.angles.len() - 1] - below(a)) + self.prefix[b]
        }
    }

    fn len_closed(&self, a: usize, b: usize) -> f64 {
        if a <= b {
            self.angles[b] - self.angles[a]
        } else {
            1.0 - self.angles[a] + self.angles[b]
        }
    }
}

/// Exact discrepancy sup_I |N(I) - |I|·N| by an O(m²) scan over arcs with
/// endpoints at data angles.
///
/// The excess side is attained (in the limit) by closed arcs with both
/// endpoints at data angles; the deficit side by open arcs. Scanning both and
/// taking the larger realizes the supremum exactly; the complementary-arc
/// identity makes the two maxima equal up to rounding.
pub fn discrepancy_exact(angles: &[f64]) -> Result<DiscrepancyResult> {
    if angles.is_empty() {
        return Err(Error::invalid("angle list must be nonempty"));
    }
    if angles.len() > 10_000 {
        return Err(Error::invalid(
            "the O(N^2) discrepancy scan is limited to N <= 10^4",
        ));
    }
    let s = sort_angles(angles);
    let m = s.angles.len();
    let n = s.n as f64;

    let mut best_excess = f64::NEG_INFINITY;
    let mut excess_witness = (0usize, 0usize);
    for a in 0..m {
        for b in 0..m {
            let v = s.count_closed(a, b) as f64 - n * s.len_closed(a, b);
            if v > best_excess {
                best_excess = v;
                excess_witness = (a, b);
            }
        }
    }

    // Deficit over open arcs: the open arc (angles[a], angles[b]) going CCW;
    // a == b means the full circle minus that point.
    let mut best_deficit = f64::NEG_INFINITY;
    let mut deficit_witness = (0usize, 0usize);
    for a in 0..m {
        for b in 0..m {
            let (len, inner) = if a == b {
                (1.0, s.n - s.count_closed(a, a))
            } else {
                let len = s.len_closed(a, b);
                let inner = if (a + 1) % m == b && m > 1 {
                    0
                } else {
                    s.count_closed((a + 1) % m, (b + m - 1) % m)
                };
                (len, inner)
            };
            let v = n * len - inner as f64;
            if v > best_deficit {
                best_deficit = v;
                deficit_witness = (a, b);
            }
        }
    }

    // The two maxima agree up to rounding (complementary-arc identity); ties
    // go to the witness with the smaller start angle, excess side first.
    let excess_arc = CircleInterval {
        start: s.angles[excess_witness.0],
        length: s.len_closed(excess_witness.0, excess_witness.1),
    };
    let deficit_arc = CircleInterval {
        start: s.angles[deficit_witness.0],
        length: if deficit_witness.0 == deficit_witness.1 {
            1.0
        } else {
            s.len_closed(deficit_witness.0, deficit_witness.1)
        },
    };
    let tie = (best_excess - best_deficit).abs() <= 1e-12 * n.max(1.0);
    let (value, witness, side) = if best_excess >= best_deficit && (!tie || excess_arc.start <= deficit_arc.start)
        || (tie && excess_arc.start <= deficit_arc.start)
    {
        (best_excess, excess_arc, Side::Excess)
    } else {
        (best_deficit, deficit_arc, Side::Deficit)
    };
    Ok(DiscrepancyResult { value, witness, side })
}

/// The deficit-side maximum computed directly over open arcs; by the
/// complementary-arc identity it equals the excess-side maximum. Exposed for
/// the identity check.
pub fn deficit_maximum(angles: &[f64]) -> Result<f64> {
    let s = sort_angles(angles);
    if s.n == 0 {
        return Err(Error::invalid("angle list must be nonempty"));
    }
    let m = s.angles.len();
    let n = s.n as f64;
    let mut best = f64::NEG_INFINITY;
    for a in 0..m {
        for b in 0..m {
            let (len, inner) = if a == b {
                (1.0, s.n - s.count_closed(a, a))
            } else {
                let len = s.len_closed(a, b);
                let inner = if (a + 1) % m == b && m > 1 {
                    0
                } else {
                    s.count_closed((a + 1) % m, (b + m - 1) % m)
                };
                (len, inner)
            };
            best = best.max(n * len - inner as f64);
        }
    }
    Ok(best)
}

/// Brute-force lower bound: max of |N(I) - |I|N| over closed arcs whose
/// endpoints lie on a uniform grid of `resolution` points plus all data
/// angles shifted by ±1e-12.
pub fn discrepancy_grid_oracle(angles: &[f64], resolution: usize) -> f64 {
    assert!(resolution >= 1_000, "oracle resolution must be at least 10^3");
    let data: Vec<f64> = angles.iter().map(|&t| normalize_angle(t)).collect();
    let n = data.len() as f64;

    let mut endpoints: Vec<f64> = (0..resolution).map(|g| g as f64 / resolution as f64).collect();
    for &t in &data {
        endpoints.push(normalize_angle(t - 1e-12));
        endpoints.push(normalize_angle(t + 1e-12));
    }
    endpoints.sort_by(|p, q| p.partial_cmp(q).unwrap());
    endpoints.dedup();

    let mut sorted = data.clone();
    sorted.sort_by(|p, q| p.partial_cmp(q).unwrap());
    // le[i]: count of data angles <= endpoints[i]; lt[i]: strictly below.
    let mut le = Vec::with_capacity(endpoints.len());
    let mut lt = Vec::with_capacity(endpoints.len());
    for &e in &endpoints {
        le.push(sorted.partition_point(|&t| t <= e));
        lt.push(sorted.partition_point(|&t| t < e));
    }

    let k = endpoints.len();
    let total = sorted.len();
    let mut best = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let (count, len) = if i <= j {
                ((le[j] - lt[i]) as f64, endpoints[j] - endpoints[i])
            } else {
                (
                    ((total - lt[i]) + le[j]) as f64,
                    1.0 - endpoints[i] + endpoints[j],
                )
            };
            let v = (count - n * len).abs();
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// Discrepancy and height bound report against the constant ladder.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub discrepancy: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    #[serde(rename = "H_log")]
    pub h_log: f64,
    /// C·√(N·h) per constant; the Erdős-Turán 16 entry uses √(N·log H).
    pub rhs_per_constant: BTreeMap<String, f64>,
    /// D / √(N·h).
    pub ratio: f64,
    pub satisfied: BTreeMap<String, bool>,
}

fn bounds_from_parts(roots: &RootSet, tolerance: f64) -> Result<BoundsReport> {
    let disc = discrepancy_exact(&roots.angles())?;
    let h = height_h_from_roots(roots, tolerance)?;
    let h_log = height_big_h_from_roots(roots, 2048);
    let n = roots.degree();
    let t = constants::shared();
    let sqrt_nh = (n as f64 * h).sqrt();
    let sqrt_nh_log = (n as f64 * h_log.max(0.0)).sqrt();

    let mut rhs = BTreeMap::new();
    rhs.insert("c_et16".to_string(), 16.0 * sqrt_nh_log);
    rhs.insert("c_ganelius".to_string(), t.c_ganelius * sqrt_nh);
    rhs.insert("c_sound".to_string(), t.c_sound * sqrt_nh);
    rhs.insert("c_new".to_string(), t.c_new * sqrt_nh);
    rhs.insert(
        "c_triangle_discrepancy".to_string(),
        t.c_triangle_discrepancy * sqrt_nh,
    );

    let mut satisfied = BTreeMap::new();
    for (name, bound) in &rhs {
        satisfied.insert(name.clone(), disc.value <= bound + 1e-9);
    }

    Ok(BoundsReport {
        discrepancy: disc.value,
        n,
        h,
        h_log,
        ratio: disc.value / sqrt_nh,
        rhs_per_constant: rhs,
        satisfied,
    })
}

/// Report from coefficients: solves for the roots first.
pub fn bounds_report(p: &ComplexPolynomial) -> Result<BoundsReport> {
    let roots = find_roots(p, 1e-10)?;
    bounds_from_parts(&roots, 1e-9)
}

/// Report from a known root multiset (stable at any degree).
pub fn bounds_report_from_roots(roots: &RootSet) -> Result<BoundsReport> {
    bounds_from_parts(roots, 1e-9)
}

/// Counts roots on the real axis (θ within 1e-9 of 0 or 1/2) and returns the
/// pair (count, 2·D); the count never exceeds the bound.
pub fn real_root_bound(roots: &RootSet, disc: &DiscrepancyResult) -> (usize, f64) {
    let count = roots
        .roots()
        .iter()
        .filter(|r| angle_distance(r.theta, 0.0) < 1e-9 || angle_distance(r.theta, 0.5) < 1e-9)
        .count();
    (count, 2.0 * disc.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_equal_angles_give_full_discrepancy() {
        let d = discrepancy_exact(&[0.0; 7]).unwrap();
        assert_eq!(d.value, 7.0);
        assert_eq!(d.witness.length, 0.0);
    }

    #[test]
    fn equally_spaced_angles_give_one() {
        let n = 10;
        let angles: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let d = discrepancy_exact(&angles).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12, "value = {}", d.value);
    }

    #[test]
    fn single_angle_gives_one() {
        let d = discrepancy_exact(&[0.3]).unwrap();
        assert_eq!(d.value, 1.0);
        assert_eq!(d.witness.start, 0.3);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(discrepancy_exact(&[]).is_err());
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let angles: Vec<f64> = (0..40).map(|_| rng.gen::<f64>()).collect();
        let base = discrepancy_exact(&angles).unwrap().value;
        for &shift in &[0.1, 0.37, 0.777, 0.99] {
            let shifted: Vec<f64> = angles.iter().map(|&t| normalize_angle(t + shift)).collect();
            let v = discrepancy_exact(&shifted).unwrap().value;
            assert!((v - base).abs() < 1e-12, "shift {shift}: {v} vs {base}");
        }
    }

    #[test]
    fn complementary_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let n = rng.gen_range(2..60);
            let angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let d = discrepancy_exact(&angles).unwrap().value;
            let deficit = deficit_maximum(&angles).unwrap();
            assert!((d - deficit).abs() < 1e-12, "excess {d} vs deficit {deficit}");
        }
    }

    #[test]
    fn oracle_trivia() {
        assert!((discrepancy_grid_oracle(&[0.0; 5], 1000) - 5.0).abs() < 1e-9);
        let n = 8;
        let angles: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let v = discrepancy_grid_oracle(&angles, 1000);
        assert!((v - 1.0).abs() <= n as f64 / 1000.0 + 1e-9, "v = {v}");
    }

    #[test]
    fn oracle_sandwiches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let n = rng.gen_range(5..50);
            let angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let exact = discrepancy_exact(&angles).unwrap().value;
            let oracle = discrepancy_grid_oracle(&angles, 2000);
            assert!(oracle <= exact + 1e-9, "oracle {oracle} > exact {exact}");
            assert!(
                exact <= oracle + n as f64 / 2000.0,
                "gap too large: exact {exact}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn value_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..10 {
            let n = rng.gen_range(1..40);
            let angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let d = discrepancy_exact(&angles).unwrap().value;
            assert!(d >= 1.0 - 1e-12);
            assert!(d <= n as f64 + 1e-12);
        }
    }

    #[test]
    fn bounds_report_on_power_of_linear() {
        let roots = RootSet::from_pairs(&vec![(1.0, 0.0); 20]).unwrap();
        let rep = bounds_report_from_roots(&roots).unwrap();
        assert_eq!(rep.discrepancy, 20.0);
        let c_lower = constants::shared().c_lower;
        assert!((rep.ratio - c_lower).abs() < 1e-4, "ratio = {}", rep.ratio);
        assert!(rep.satisfied["c_new"]);
        assert!(rep.satisfied["c_et16"]);
    }

    #[test]
    fn bounds_report_from_coefficients() {
        // z^6 - 1: D = 1, h = smyth, ratio tiny.
        let mut coeffs = vec![0.0; 6];
        coeffs[0] = -1.0;
        let p = ComplexPolynomial::from_real(&coeffs).unwrap();
        let rep = bounds_report(&p).unwrap();
        assert!((rep.discrepancy - 1.0).abs() < 1e-9);
        assert!((rep.h - constants::shared().smyth).abs() < 1e-7);
        assert!(rep.satisfied.values().all(|&b| b));
    }

    #[test]
    fn real_root_bound_cases() {
        let pol = RootSet::from_pairs(&vec![(1.0, 0.0); 6]).unwrap();
        let d = discrepancy_exact(&pol.angles()).unwrap();
        let (count, bound) = real_root_bound(&pol, &d);
        assert_eq!(count, 6);
        assert_eq!(bound, 12.0);

        // z² + 1: roots ±i, no real roots.
        let pm_i = RootSet::from_pairs(&[(1.0, 0.25), (1.0, 0.75)]).unwrap();
        let d2 = discrepancy_exact(&pm_i.angles()).unwrap();
        let (count2, bound2) = real_root_bound(&pm_i, &d2);
        assert_eq!(count2, 0);
        assert!(count2 as f64 <= bound2);
    }

    #[test]
    fn real_roots_bounded_by_twice_discrepancy_on_random_real_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            // Conjugate-closed angles plus some real roots.
            let pairs = rng.gen_range(0..5);
            let reals = rng.gen_range(0..4);
            let mut v: Vec<(f64, f64)> = Vec::new();
            for _ in 0..pairs {
                let theta = rng.gen_range(0.01..0.49);
                let rho = rng.gen_range(0.5..2.0);
                v.push((rho, theta));
                v.push((rho, 1.0 - theta));
            }
            for _ in 0..reals {
                let rho = rng.gen_range(0.5..2.0);
                let theta = if rng.gen_bool(0.5) { 0.0 } else { 0.5 };
                v.push((rho, theta));
            }
            if v.is_empty() {
                v.push((1.0, 0.0));
            }
            let roots = RootSet::from_pairs(&v).unwrap();
            let d = discrepancy_exact(&roots.angles()).unwrap();
            let (count, bound) = real_root_bound(&roots, &d);
            assert!(count as f64 <= bound + 1e-12);
        }
    }
}
