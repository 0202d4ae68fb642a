//! The counting identity behind the uniform meeting-position distribution:
//! `φ(i) + φ(M-i) = 2^{M-1}`, where `φ(i)` counts subsets of `{1,…,M-1}`
//! with at most `i-1` elements. Exact big-integer arithmetic throughout
//! (`2^{M-1}` overflows 64 bits past M = 65).

use num::{BigRational, BigUint, One, Zero};

use crate::{ModelError, Result};

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// `φ(i) = Σ_{j=1}^{i} C(M-j-1, i-j) 2^{j-1}`, for `1 ≤ i ≤ M-1`.
pub fn phi(m: u64, i: u64) -> Result<BigUint> {
    if i == 0 || i >= m {
        return Err(ModelError::OutOfRange(format!(
            "phi offset {i} outside [1, {}]",
            m - 1
        )));
    }
    let mut acc = BigUint::zero();
    for j in 1..=i {
        acc += binomial(m - j - 1, i - j) << (j - 1);
    }
    Ok(acc)
}

/// Independent oracle: `φ(i)` equals the number of subsets of `{1,…,M-1}`
/// with at most `i-1` elements, `Σ_{j=0}^{i-1} C(M-1, j)`.
pub fn phi_subset_count(m: u64, i: u64) -> BigUint {
    (0..i).map(|j| binomial(m - 1, j)).sum()
}

/// Check `φ(i) + φ(M-i) = 2^{M-1}` for every `i ∈ [1, M-1]`.
pub fn identity_check(m: u64) -> Result<bool> {
    if m < 2 {
        return Err(ModelError::OutOfRange("identity needs M ≥ 2".into()));
    }
    let target = BigUint::one() << (m - 1);
    for i in 1..m {
        if phi(m, i)? + phi(m, m - i)? != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact rational value of the weighted two-sided sum
/// `Σ_{j=1}^{i} C(M-j-1, i-j) (1/2)^{M-j} + Σ_{r=1}^{M-i} C(M-r-1, M-i-r) (1/2)^{M-r}`,
/// which equals 1 for every valid `(M, i)`.
pub fn lhs_exact(m: u64, i: u64) -> Result<BigRational> {
    if i == 0 || i >= m {
        return Err(ModelError::OutOfRange(format!(
            "offset {i} outside [1, {}]",
            m - 1
        )));
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut acc = BigRational::zero();
    for j in 1..=i {
        let c = BigRational::from_integer(binomial(m - j - 1, i - j).into());
        acc += c * pow(&half, m - j);
    }
    for r in 1..=(m - i) {
        let c = BigRational::from_integer(binomial(m - r - 1, m - i - r).into());
        acc += c * pow(&half, m - r);
    }
    Ok(acc)
}

fn pow(x: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_values() {
        assert_eq!(phi(4, 1).unwrap(), BigUint::from(1u32));
        // C(2,1)·1 + C(1,0)·2 = 4
        assert_eq!(phi(4, 2).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn phi_matches_subset_count() {
        for m in 2..=20u64 {
            for i in 1..m {
                assert_eq!(phi(m, i).unwrap(), phi_subset_count(m, i), "M={m} i={i}");
            }
        }
    }

    #[test]
    fn lhs_is_exactly_one() {
        // M=4, i=2 splits as 1/4 + 1/4 + 1/4 + 1/4.
        let v = lhs_exact(4, 2).unwrap();
        assert_eq!(v, BigRational::from_integer(1.into()));
        for m in 2..=25u64 {
            for i in 1..m {
                assert_eq!(
                    lhs_exact(m, i).unwrap(),
                    BigRational::from_integer(1.into()),
                    "M={m} i={i}"
                );
            }
        }
    }

    #[test]
    fn identity_holds_through_sixty() {
        for m in 2..=60u64 {
            assert!(identity_check(m).unwrap(), "M={m}");
        }
    }

    #[test]
    fn range_violations_rejected() {
        assert!(phi(4, 0).is_err());
        assert!(phi(4, 4).is_err());
        assert!(identity_check(1).is_err());
    }
}
