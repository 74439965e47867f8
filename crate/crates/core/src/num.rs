//! Exact scalar types and the small helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Integer coordinates with respect to a fixed lattice basis.
pub type LatticeVector = Vec<Int>;
/// Exact rational coordinates in `N ⊗ Q`.
pub type RationalVector = Vec<Rat>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn ivec(v: &[i64]) -> LatticeVector {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn to_rat_vec(v: &[Int]) -> RationalVector {
    v.iter().map(rat_int).collect()
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn lcm_denominators(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// Scale a nonzero rational vector to the unique primitive integer vector on
/// the same ray (positive multiple).
pub fn primitive_of_rational(v: &[Rat]) -> Option<LatticeVector> {
    let l = lcm_denominators(v);
    let scaled: Vec<Int> = v.iter().map(|x| (x * rat_int(&l)).to_integer()).collect();
    let g = gcd_all(&scaled);
    if g.is_zero() {
        return None;
    }
    Some(scaled.into_iter().map(|x| x / &g).collect())
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + x * rat_int(y))
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn abs_int(x: &Int) -> Int {
    x.abs()
}

/// `1 - 1/m` when `d` is a standard coefficient, returning `m`.
pub fn standard_order(d: &Rat) -> Option<Int> {
    if d.is_negative() || *d >= Rat::one() {
        return None;
    }
    let inv = (Rat::one() - d).recip();
    inv.is_integer().then(|| inv.to_integer())
}

pub fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_scaling() {
        let v = vec![rat(1, 3), rat(2, 3), rat(0, 1)];
        assert_eq!(primitive_of_rational(&v).unwrap(), ivec(&[1, 2, 0]));
        assert!(primitive_of_rational(&[Rat::zero(), Rat::zero()]).is_none());
    }

    #[test]
    fn standard_coefficients() {
        assert_eq!(standard_order(&rat(1, 2)), Some(int(2)));
        assert_eq!(standard_order(&Rat::zero()), Some(int(1)));
        assert_eq!(standard_order(&rat(2, 5)), None);
        assert_eq!(standard_order(&Rat::one()), None);
    }

    #[test]
    fn frac_of_negative() {
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
    }
}
