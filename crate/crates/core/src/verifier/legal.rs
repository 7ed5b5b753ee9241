//! Counting legal degree sequences with a prescribed big-entry sum.
//!
//! A sequence `(d_0, ..., d_j)` is legal when each entry is either big
//! (`d_i >= sqrt(eps) d`, here capped at `d_cap`) or small (`d_i = f_i`).
//! For a fixed set of `s` big positions the count is the number of
//! compositions of `D` into `s` parts in `[t, d_cap]`, `t = ceil(sqrt(eps) d)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, ceil_sqrt, Rational, Verdict};

#[derive(Debug, Clone, Serialize)]
pub struct LegalCount {
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub count: BigUint,
    /// Counts split by the number of big entries.
    #[serde(serialize_with = "biguint_strings")]
    pub by_big: Vec<BigUint>,
    /// `t = ceil(sqrt(eps) d)`.
    pub threshold: u64,
    /// `sum_s C(j+1, s) C(D-1, s-1)`, choosing big positions among all
    /// `j+1` entries.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub bound: BigUint,
    /// The same sum with `C(j, s)`; it undercounts position choices by one
    /// entry and can be exceeded (e.g. `f = (1,1,0)`, `t = 2`, `D = 4`).
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub bound_j: BigUint,
    /// `count <= bound` (not applicable when `d_cap < D`).
    pub verdict: Verdict,
    pub verdict_j: Verdict,
}

fn biguint_strings<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `t = ceil(sqrt(eps) d)` as an integer.
pub fn big_threshold(eps: &Rational, d: &Rational) -> Result<u64> {
    if *eps <= Rational::zero() || *d <= Rational::zero() {
        return Err(Error::invalid("eps and d must be positive"));
    }
    let t = ceil_sqrt(&(eps * d * d));
    t.try_into().map_err(|_| Error::invalid("threshold sqrt(eps) d too large"))
}

/// Ordered `s`-tuples from `[lo, hi]` with sum `total`, for every `s <= max_s`.
fn compositions(total: usize, lo: usize, hi: usize, max_s: usize) -> Vec<BigUint> {
    // ways[k] = tuples of the current length summing to k
    let mut ways = vec![BigUint::zero(); total + 1];
    ways[0] = BigUint::one();
    let mut out = vec![ways[total].clone()];
    for _ in 1..=max_s {
        let mut next = vec![BigUint::zero(); total + 1];
        for (k, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for part in lo..=hi.min(total.saturating_sub(k)) {
                next[k + part] += w;
            }
        }
        ways = next;
        out.push(ways[total].clone());
    }
    out
}

/// Binomial bound `sum_s C(positions, s) C(D-1, s-1)`; the `s = 0` term is
/// `[D = 0]`.
fn binomial_bound(positions: u64, big_sum: u64) -> BigUint {
    if big_sum == 0 {
        return BigUint::one();
    }
    (1..=positions)
        .map(|s| binomial(positions, s) * binomial(big_sum - 1, s - 1))
        .sum()
}

pub fn count_legal_sequences(f: &[usize], eps: &Rational, d: &Rational, big_sum: usize, d_cap: usize) -> Result<LegalCount> {
    let t = big_threshold(eps, d)?;
    if (d_cap as u64) < t {
        return Err(Error::invalid(format!("d_cap = {d_cap} is below the big threshold {t}")));
    }
    if let Some(i) = (0..f.len()).find(|&i| f[i] as u64 >= t) {
        return Err(Error::precondition(format!(
            "child count f_{i} = {} reaches the big threshold {t}",
            f[i]
        )));
    }
    let slots = f.len();
    let t = t as usize;
    let max_s = slots.min(big_sum / t);
    let per_set = compositions(big_sum, t, d_cap, max_s);
    let mut by_big = vec![BigUint::zero(); slots + 1];
    for s in 0..=max_s {
        by_big[s] = binomial(slots as u64, s as u64) * &per_set[s];
    }
    let count: BigUint = by_big.iter().sum();
    let bound = binomial_bound(slots as u64, big_sum as u64);
    let bound_j = binomial_bound(slots.saturating_sub(1) as u64, big_sum as u64);
    let applies = d_cap >= big_sum;
    let verdict_of = |b: &BigUint| {
        if applies {
            Verdict::from_bool(count <= *b)
        } else {
            Verdict::NotApplicable
        }
    };
    Ok(LegalCount {
        verdict: verdict_of(&bound),
        verdict_j: verdict_of(&bound_j),
        count,
        by_big,
        threshold: t as u64,
        bound,
        bound_j,
    })
}
