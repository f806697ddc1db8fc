//! The named constants of the discrepancy problem, every one derived from a
//! series or a formula at startup. No decimal literals: downstream modules
//! consume these values, they never retype them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::Kahan;

/// Hard cap on series terms so absurd tolerances fail instead of hanging.
const MAX_TERMS: usize = 200_000_000;

/// Catalan's constant k = Σ_{n≥0} (-1)ⁿ/(2n+1)².
///
/// Direct alternating summation with compensated accumulation; consecutive
/// partial sums bracket the limit, so the midpoint carries an error below
/// half of the first omitted term.
pub fn compute_catalan(tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut acc = Kahan::default();
    let mut n = 0usize;
    loop {
        let next = {
            let d = (2 * n + 3) as f64;
            1.0 / (d * d)
        };
        let term = {
            let d = (2 * n + 1) as f64;
            1.0 / (d * d)
        };
        acc.add(if n % 2 == 0 { term } else { -term });
        if 0.5 * next < tolerance {
            // Midpoint of the bracketing partial sums S_n and S_{n+1}.
            let half = 0.5 * next;
            return Ok(acc.value() + if n % 2 == 0 { -half } else { half });
        }
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::numeric(format!(
                "catalan series cannot reach tolerance {tolerance:.3e} within {MAX_TERMS} terms \
                 (next term {next:.3e})"
            )));
        }
    }
}

/// L(2, χ₃) = Σ_{n≥1} χ₃(n)/n² with χ₃ the quadratic character mod 3.
///
/// Summed in blocks b_m = (3m+1)⁻² - (3m+2)⁻² so the tail is positive and
/// monotone; by the mean value theorem b_m ≤ 2/(3m+1)³, so the tail beyond M
/// blocks is at most 1/(3(3M-2)²) by integral comparison.
pub fn compute_l2_chi3(tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut acc = Kahan::default();
    let mut m = 0usize;
    loop {
        let a = (3 * m + 1) as f64;
        let b = (3 * m + 2) as f64;
        acc.add(1.0 / (a * a) - 1.0 / (b * b));
        m += 1;
        let bound = {
            let d = (3 * m) as f64 - 2.0;
            1.0 / (3.0 * d * d)
        };
        if bound < tolerance {
            // Tail lies in [0, bound]; take its midpoint.
            return Ok(acc.value() + 0.5 * bound);
        }
        if m > MAX_TERMS {
            return Err(Error::numeric(format!(
                "L(2,chi3) series cannot reach tolerance {tolerance:.3e} within {MAX_TERMS} blocks"
            )));
        }
    }
}

/// Every named constant of the discrepancy/extremal problem.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantTable {
    /// Catalan's constant.
    pub catalan: f64,
    /// L(2, χ₃).
    pub l2_chi3: f64,
    /// 3√3 L(2,χ₃)/(4π): the mean of log⁺|2 sin πθ|, i.e. h((z-1)^N)/N.
    pub smyth: f64,
    /// √(2π/catalan), the 1954 discrepancy constant.
    pub c_ganelius: f64,
    /// 8/π, the 2019 discrepancy constant.
    pub c_sound: f64,
    /// 4/√π, the sharp constant delivered by the extremal problem.
    pub c_new: f64,
    /// √(4π/(3√3 L(2,χ₃))): the lower bound forced by (z-1)^N.
    pub c_lower: f64,
    /// π²/(3√3 L(2,χ₃)): the C(F) threshold that keeps the optimal δ in (0,1].
    pub c_threshold: f64,
    /// (4/π) log(1+√2) = C(F▲) for the triangle function.
    pub c_triangle: f64,
    /// (8/π)√log(1+√2): the discrepancy constant the triangle function yields.
    pub c_triangle_discrepancy: f64,
}

/// Builds the table at the requested series tolerance.
pub fn table(tolerance: f64) -> Result<ConstantTable> {
    let catalan = compute_catalan(tolerance)?;
    let l2_chi3 = compute_l2_chi3(tolerance)?;
    let smyth = 3.0 * 3.0f64.sqrt() * l2_chi3 / (4.0 * PI);
    let log_silver = (1.0 + 2.0f64.sqrt()).ln();
    let t = ConstantTable {
        catalan,
        l2_chi3,
        smyth,
        c_ganelius: (2.0 * PI / catalan).sqrt(),
        c_sound: 8.0 / PI,
        c_new: 4.0 / PI.sqrt(),
        c_lower: (1.0 / smyth).sqrt(),
        c_threshold: PI / (4.0 * smyth),
        c_triangle: 4.0 / PI * log_silver,
        c_triangle_discrepancy: 8.0 / PI * log_silver.sqrt(),
    };
    assert!(
        t.catalan > 0.9159 && t.catalan < 0.9160,
        "catalan out of range: {}",
        t.catalan
    );
    assert!(
        t.l2_chi3 > 0.78 && t.l2_chi3 < 0.79,
        "L(2,chi3) out of range: {}",
        t.l2_chi3
    );
    assert!(
        t.c_lower < t.c_new
            && t.c_new < t.c_triangle_discrepancy
            && t.c_triangle_discrepancy < t.c_sound
            && t.c_sound < t.c_ganelius
            && t.c_ganelius < 16.0,
        "constant ladder is out of order: {t:?}"
    );
    assert!(
        t.c_threshold > t.c_triangle,
        "triangle function must clear the delta threshold"
    );
    Ok(t)
}

/// The cached table used throughout the crate (series tolerance 1e-13).
pub fn shared() -> &'static ConstantTable {
    static SHARED: OnceLock<ConstantTable> = OnceLock::new();
    SHARED.get_or_init(|| table(1e-13).expect("constant table at default tolerance"))
}

impl ConstantTable {
    /// Field order used by the JSON emitter and the bounds reports.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("catalan", self.catalan),
            ("l2_chi3", self.l2_chi3),
            ("smyth", self.smyth),
            ("c_ganelius", self.c_ganelius),
            ("c_sound", self.c_sound),
            ("c_new", self.c_new),
            ("c_lower", self.c_lower),
            ("c_threshold", self.c_threshold),
            ("c_triangle", self.c_triangle),
            ("c_triangle_discrepancy", self.c_triangle_discrepancy),
        ]
    }

    /// JSON with 15 significant digits, stable field order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"schema\": \"hilbert-et/1\"");
        for (name, value) in self.entries() {
            out.push_str(&format!(",\n  \"{name}\": {value:.14e}"));
        }
        out.push_str("\n}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::clausen2;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn catalan_digits() {
        let k = compute_catalan(1e-12).unwrap();
        assert!(k > 0.9159 && k < 0.9160, "k = {k}");
        // Cl₂(π/2) = Σ sin(kπ/2)/k² is the same alternating series, evaluated
        // through a completely different route (zeta-accelerated expansion).
        assert!((k - clausen2(FRAC_PI_2)).abs() < 1e-12);
    }

    #[test]
    fn catalan_respects_loose_tolerance() {
        let tight = compute_catalan(1e-12).unwrap();
        let loose = compute_catalan(0.5).unwrap();
        assert!((loose - tight).abs() < 0.5);
    }

    #[test]
    fn catalan_rejects_bad_tolerance() {
        assert!(compute_catalan(0.0).is_err());
        assert!(compute_catalan(-1.0).is_err());
    }

    #[test]
    fn catalan_unattainable_tolerance_fails_gracefully() {
        assert!(matches!(
            compute_catalan(1e-30),
            Err(Error::NumericFailure(_))
        ));
    }

    #[test]
    fn l2_chi3_two_summation_orders_agree() {
        let blocked = compute_l2_chi3(1e-12).unwrap();
        // Independent route: plain ascending sum over n with the same integral
        // tail bound applied at the end.
        let mut acc = Kahan::default();
        let cut = 2_000_000usize;
        for n in 1..=cut {
            match n % 3 {
                1 => acc.add(1.0 / (n as f64 * n as f64)),
                2 => acc.add(-1.0 / (n as f64 * n as f64)),
                _ => {}
            }
        }
        let m = cut / 3 + 1;
        let d = (3 * m) as f64 - 2.0;
        let direct = acc.value() + 0.5 / (3.0 * d * d);
        assert!(
            (blocked - direct).abs() < 1e-10,
            "blocked {blocked} vs direct {direct}"
        );
    }

    #[test]
    fn derived_ratio_constants_match_quoted_decimals() {
        let t = table(1e-13).unwrap();
        assert!((t.c_lower - 1.75936).abs() < 5e-6 + 1e-5, "c_lower = {}", t.c_lower);
        assert!((t.c_threshold - 2.43107).abs() < 1e-5 + 5e-6, "c_threshold = {}", t.c_threshold);
        assert!((t.c_sound - 2.5464).abs() < 1e-4, "c_sound = {}", t.c_sound);
        assert!((t.c_new - 2.2567).abs() < 1e-4, "c_new = {}", t.c_new);
        assert!((t.c_triangle - 1.12219).abs() < 1e-5, "c_triangle = {}", t.c_triangle);
        assert!(
            (t.c_triangle_discrepancy - 2.3906).abs() < 1e-4,
            "c_triangle_discrepancy = {}",
            t.c_triangle_discrepancy
        );
    }

    #[test]
    fn ladder_is_strictly_ordered() {
        let t = shared();
        assert!(t.c_lower < t.c_new);
        assert!(t.c_new < t.c_triangle_discrepancy);
        assert!(t.c_triangle_discrepancy < t.c_sound);
        assert!(t.c_sound < t.c_ganelius);
        assert!(t.c_ganelius < 16.0);
    }

    #[test]
    fn json_has_fifteen_significant_digits() {
        let s = shared().to_json();
        assert!(s.contains("\"catalan\": 9.15965594177219"));
        assert!(s.contains("\"schema\": \"hilbert-et/1\""));
    }
}
