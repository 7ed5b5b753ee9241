//! Concrete checks of the structural bounds satisfied by `q`-sparse hosts,
//! and the constructive procedures behind the tree argument (peeling, fit
//! decomposition, legal degree sequences, the path length `ℓ̂`).
//!
//! Logarithms are base 2. Every comparison is decided exactly: bounds are
//! rearranged into integer-power comparisons between rationals, and the
//! constant `e` enters only through rational bounds `e_lo < e < e_hi`.

pub mod fit;
pub mod legal;
pub mod peel;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

pub use fit::{fit_decompose, verify_fit_partition, FitClass, FitPartition, FitRecord};
pub use legal::{count_legal_sequences, LegalCount};
pub use peel::{peel_min_degree, PeelResult};

use crate::counting::{count_copies, packing_number, PackingMode};
use crate::error::{Error, Result};
use crate::exact::{biguint_to_rational, e_bounds, format_rational, int, ln_rational, Rational, RationalRoot, Verdict};
use crate::expectation::{expected_copies, require_q_sparse, required_l_from, RequiredL};
use crate::graph::density::max_density;
use crate::graph::io::to_graph6;
use crate::graph::Graph;
use crate::limits::Limits;

#[derive(Debug, Clone, Serialize)]
pub struct PropositionReport {
    pub prop_id: String,
    pub inputs: Value,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn inputs(h: &Graph, n: usize, q: &RationalRoot) -> Value {
    json!({ "graph6": to_graph6(h), "n": n, "q": q })
}

/// Decides `a^ea < b^eb` for positive rationals, using logarithms when they
/// are far apart and exact powers otherwise.
pub(crate) fn pow_lt(a: &Rational, ea: u64, b: &Rational, eb: u64) -> bool {
    let la = ln_rational(a) * ea as f64;
    let lb = ln_rational(b) * eb as f64;
    let slack = 1e-9 * (1.0 + la.abs().max(lb.abs()));
    if la + slack < lb {
        return true;
    }
    if la > lb + slack {
        return false;
    }
    num_traits::pow(a.clone(), ea as usize) < num_traits::pow(b.clone(), eb as usize)
}

/// `q = r^(1/k)` as `(r, k)`.
fn parts(q: &RationalRoot) -> (&Rational, u64) {
    (q.radicand(), q.index() as u64)
}

fn approx(x: f64) -> String {
    format!("{x:.6}")
}

/// Reports for the maximum-degree, maximum-density and edge-count bounds.
///
/// The unconditional `log n` forms rely on `n q^{log n} <= 1`, i.e.
/// `q <= 1/2`; above that they are reported as not applicable. The
/// `c`-forms use the exact `c` with `q = n^{-c}` and need `q < 1`.
pub fn verify_structure(h: &Graph, n: usize, q: &RationalRoot, limits: &Limits) -> Result<Vec<PropositionReport>> {
    if n < 2 {
        return Err(Error::invalid("need n >= 2"));
    }
    require_q_sparse(h, n, q, limits)?;
    let inp = inputs(h, n, q);
    let nr = int(n as u64);
    let two = int(2u32);
    let half = RationalRoot::from_rational(Rational::new(1.into(), 2.into()));
    let log_n = (n as f64).log2();
    let (e_lo, e_hi) = e_bounds();
    let mut out = Vec::new();

    // max degree <= max{log n, 2enq}
    let delta = h.max_degree();
    let nq = q.mul_rational(&nr);
    let by_log = num_traits::pow(BigUint::from(2u32), delta) <= BigUint::from(n);
    let lo_rhs = nq.mul_rational(&(e_lo * &two));
    let hi_rhs = nq.mul_rational(&(e_hi * &two));
    let d = RationalRoot::from_integer(delta as u64);
    let verdict = if by_log || d <= lo_rhs {
        Verdict::Pass
    } else if d > hi_rhs {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let witness = verdict.is_failure().then(|| {
        let v = (0..h.vertex_count()).find(|&v| h.degree(v) == delta).unwrap_or(0);
        format!("vertex {v} has degree {delta}")
    });
    out.push(PropositionReport {
        prop_id: "max-degree".into(),
        inputs: inp.clone(),
        lhs: delta.to_string(),
        rhs: approx(log_n.max(2.0 * std::f64::consts::E * nq.to_f64())),
        verdict,
        witness,
        note: None,
    });

    let m = max_density(h)?;
    let (a, b) = (m.numerator as u64, m.denominator as u64);
    let m_str = format_rational(&m.value());
    let dense_witness = |v: Verdict| v.is_failure().then(|| format!("vertex set {:?}", m.witness));

    // m(H) < log n  <=>  2^a < n^b
    let verdict = if *q > half {
        Verdict::NotApplicable
    } else {
        Verdict::from_bool(pow_lt(&two, a, &nr, b))
    };
    out.push(PropositionReport {
        prop_id: "max-density-log".into(),
        inputs: inp.clone(),
        lhs: m_str.clone(),
        rhs: approx(log_n),
        verdict,
        witness: dense_witness(verdict),
        note: (verdict == Verdict::NotApplicable).then(|| "needs q <= 1/2".to_string()),
    });

    // q = n^{-c}: m(H) < 1/c  <=>  (1/q)^m < n  <=>  (1/r)^a < n^{b k}
    let below_one = *q < RationalRoot::one() && !q.is_zero();
    let c = (below_one).then(|| -q.ln() / (n as f64).ln());
    let (r, k) = parts(q);
    let verdict = if below_one {
        Verdict::from_bool(pow_lt(&r.recip(), a, &nr, b * k))
    } else {
        Verdict::NotApplicable
    };
    out.push(PropositionReport {
        prop_id: "max-density-c".into(),
        inputs: inp.clone(),
        lhs: m_str,
        rhs: c.map_or("undefined".into(), |c| approx(1.0 / c)),
        verdict,
        witness: dense_witness(verdict),
        note: (verdict == Verdict::NotApplicable).then(|| "needs q < 1".to_string()),
    });

    // e_H < n log n  <=>  2^{e_H} < n^n
    let e_h = h.edge_count() as u64;
    let verdict = if *q > half {
        Verdict::NotApplicable
    } else {
        Verdict::from_bool(pow_lt(&two, e_h, &nr, n as u64))
    };
    out.push(PropositionReport {
        prop_id: "edge-count-log".into(),
        inputs: inp.clone(),
        lhs: e_h.to_string(),
        rhs: approx(n as f64 * log_n),
        verdict,
        witness: None,
        note: (verdict == Verdict::NotApplicable).then(|| "needs q <= 1/2".to_string()),
    });

    // e_H < n/c  <=>  (1/q)^{e_H} < n^n
    let verdict = if below_one {
        Verdict::from_bool(pow_lt(&r.recip(), e_h, &nr, n as u64 * k))
    } else {
        Verdict::NotApplicable
    };
    out.push(PropositionReport {
        prop_id: "edge-count-c".into(),
        inputs: inp,
        lhs: e_h.to_string(),
        rhs: c.map_or("undefined".into(), |c| approx(n as f64 / c)),
        verdict,
        witness: None,
        note: (verdict == Verdict::NotApplicable).then(|| "needs q < 1".to_string()),
    });
    Ok(out)
}

/// `nu(H, J) <= e E_q X_J`.
pub fn verify_packing(h: &Graph, j: &Graph, n: usize, q: &RationalRoot, limits: &Limits) -> Result<PropositionReport> {
    require_q_sparse(h, n, q, limits)?;
    let packing = packing_number(h, j, PackingMode::Exact, limits)?;
    let expectation = expected_copies(n, q, j)?;
    let (e_lo, e_hi) = e_bounds();
    let nu = RationalRoot::from_integer(packing.size as u64);
    let verdict = if nu <= expectation.mul_rational(e_lo) {
        Verdict::Pass
    } else if nu > expectation.mul_rational(e_hi) {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let mut inp = inputs(h, n, q);
    inp["pattern"] = json!(to_graph6(j));
    Ok(PropositionReport {
        prop_id: "packing".into(),
        inputs: inp,
        lhs: packing.size.to_string(),
        rhs: approx(std::f64::consts::E * expectation.to_f64()),
        verdict,
        witness: verdict.is_failure().then(|| format!("{} disjoint copies", packing.size)),
        note: Some(format!("E_q X_J = {}", expectation)),
    })
}

/// `N(H,F) < L^{e_F} E_q X_F`, with the least admissible `L` alongside.
pub fn verify_main_inequality(
    h: &Graph,
    f: &Graph,
    n: usize,
    q: &RationalRoot,
    l: &RationalRoot,
    limits: &Limits,
) -> Result<(PropositionReport, RequiredL)> {
    require_q_sparse(h, n, q, limits)?;
    let copies = count_copies(h, f, limits)?;
    let req = required_l_from(&copies, f, n, q)?;
    let rhs = l.pow(f.edge_count() as u32).mul(&req.expectation);
    let lhs = RationalRoot::from_rational(biguint_to_rational(&copies));
    let verdict = Verdict::from_bool(lhs < rhs);
    let mut inp = inputs(h, n, q);
    inp["pattern"] = json!(to_graph6(f));
    inp["L"] = json!(l);
    let report = PropositionReport {
        prop_id: "main-inequality".into(),
        inputs: inp,
        lhs: copies.to_string(),
        rhs: rhs.to_string(),
        verdict,
        witness: verdict.is_failure().then(|| format!("required L = {}", req.value)),
        note: Some(format!("required L = {}", req.value)),
    };
    Ok((report, req))
}

/// `ℓ̂` with its maximality evidence.
#[derive(Debug, Clone, Serialize)]
pub struct EllHat {
    pub ell: u64,
    /// `c` with `n q = n^c`, as a float for display.
    pub c: f64,
    /// `(nq)^{ℓ̂+1} >= n^{1-δc}` (must hold).
    pub maximal: bool,
    /// `(nq)^{ℓ̂+2} > n`.
    pub exceeds_n: bool,
}

/// Largest `ℓ` with `(nq)^ℓ < n^{1-δc}` where `nq = n^c`.
///
/// With `δ = a/b` and `nq = r^{1/k}` the condition reads
/// `r^{bℓ+a} < n^{bk}`.
pub fn ell_hat(n: usize, q: &RationalRoot, delta: &Rational) -> Result<EllHat> {
    let nr = int(n as u64);
    let nq = q.mul_rational(&nr);
    if n < 2 || nq <= RationalRoot::one() || *q >= RationalRoot::one() {
        return Err(Error::precondition("ell-hat needs 1/n < q < 1"));
    }
    if *delta <= Rational::zero() || *delta >= Rational::one() {
        return Err(Error::invalid("delta must lie in (0,1)"));
    }
    let a: u64 = delta.numer().try_into().map_err(|_| Error::invalid("delta too large"))?;
    let b: u64 = delta.denom().try_into().map_err(|_| Error::invalid("delta too large"))?;
    let (r, k) = (nq.radicand().clone(), nq.index() as u64);
    let holds = |ell: u64| pow_lt(&r, b * ell + a, &nr, b * k);
    let c = nq.ln() / (n as f64).ln();
    // (nq)^{ℓ+δ} < n  <=>  ℓ < 1/c - δ
    let guess = (1.0 / c - delta_f64(delta)).floor().max(0.0) as u64;
    let mut ell = guess.saturating_sub(1);
    if !holds(ell) {
        ell = 0;
    }
    while holds(ell + 1) {
        ell += 1;
    }
    let maximal = !holds(ell + 1);
    let exceeds_n = nq.pow(ell as u32 + 2) > RationalRoot::from_rational(nr);
    Ok(EllHat {
        ell,
        c,
        maximal,
        exceeds_n,
    })
}

fn delta_f64(d: &Rational) -> f64 {
    ln_rational(d).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_value, rational};
    use crate::expectation::q_min;
    use crate::graph::families::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn structure_on_triangle() {
        let q = parse_value("root:120:3").unwrap();
        let reports = verify_structure(&complete(3), 10, &q, &lim()).unwrap();
        assert_eq!(reports.len(), 5);
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
        let quarter = parse_value("1/4").unwrap();
        assert!(verify_structure(&complete(3), 10, &quarter, &lim())
            .unwrap()
            .iter()
            .all(|r| r.verdict == Verdict::Pass));
        let low = parse_value("1/10").unwrap();
        assert!(matches!(
            verify_structure(&complete(3), 10, &low, &lim()),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn dense_host_at_q_one() {
        // K_7 is 1-sparse but m = 3 > log 7; the log forms do not apply there
        let reports = verify_structure(&complete(7), 7, &RationalRoot::one(), &lim()).unwrap();
        assert!(reports.iter().all(|r| !r.verdict.is_failure()));
        assert_eq!(reports[1].verdict, Verdict::NotApplicable);
    }

    #[test]
    fn packing_reports() {
        let q = q_min(&bowtie(), 10, &lim()).unwrap().q_min;
        let r = verify_packing(&bowtie(), &complete(3), 10, &q, &lim()).unwrap();
        assert_eq!(r.lhs, "2");
        assert_eq!(r.verdict, Verdict::Pass);
        let q5 = q_min(&complete(5), 20, &lim()).unwrap().q_min;
        let r = verify_packing(&complete(5), &complete(3), 20, &q5, &lim()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let none = verify_packing(&cycle(5), &complete(3), 10, &parse_value("1/2").unwrap(), &lim()).unwrap();
        assert_eq!(none.lhs, "0");
        assert_eq!(none.verdict, Verdict::Pass);
    }

    #[test]
    fn main_inequality_is_strict() {
        let q = parse_value("root:120:3").unwrap();
        let two = RationalRoot::from_integer(2);
        let (r, req) = verify_main_inequality(&complete(3), &complete(3), 10, &q, &two, &lim()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(req.value, RationalRoot::one());
        let (r, _) = verify_main_inequality(&complete(3), &complete(3), 10, &q, &RationalRoot::one(), &lim()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let (r, _) = verify_main_inequality(&cycle(5), &complete(3), 10, &parse_value("1/2").unwrap(), &two, &lim()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn ell_hat_examples() {
        let tenth = rational(1, 10);
        let e = ell_hat(1_000_000, &parse_value("1/1000").unwrap(), &tenth).unwrap();
        assert_eq!(e.ell, 1);
        assert!(e.maximal);
        let e = ell_hat(1 << 20, &RationalRoot::from_rational(rational(1, 1 << 15)), &tenth).unwrap();
        assert_eq!(e.ell, 3);
        assert!(e.maximal && e.exceeds_n);
        assert!(ell_hat(10, &parse_value("1/10").unwrap(), &tenth).is_err());
        assert!(ell_hat(10, &parse_value("1/20").unwrap(), &tenth).is_err());
    }
}
