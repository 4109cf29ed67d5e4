//! Exact arithmetic in the rings of integers of the nine imaginary quadratic
//! fields of class number one.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, usage, Result};

/// The squarefree D < 0 with h(ℚ(√D)) = 1.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

const NORM_CAP: i64 = 1_000_000_000_000;

/// ℚ(√D) for one of the nine class-number-one D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImagQuadField {
    d: i64,
    // ω² = trace·ω − norm
    trace: i64,
    norm: i64,
}

/// u + v·ω_D in the integral basis {1, ω_D}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicInt {
    pub u: i64,
    pub v: i64,
}

impl AlgebraicInt {
    pub const ZERO: AlgebraicInt = AlgebraicInt { u: 0, v: 0 };
    pub const ONE: AlgebraicInt = AlgebraicInt { u: 1, v: 0 };

    pub fn new(u: i64, v: i64) -> Self {
        AlgebraicInt { u, v }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

impl ImagQuadField {
    pub fn new(d: i64) -> Result<Self> {
        if !CLASS_NUMBER_ONE.contains(&d) {
            return usage(format!("D = {d} is not one of the nine class-number-one values"));
        }
        let (trace, norm) = if d.rem_euclid(4) == 1 { (1, (1 - d) / 4) } else { (0, -d) };
        Ok(ImagQuadField { d, trace, norm })
    }

    /// ℚ(i).
    pub fn gaussian() -> Self {
        ImagQuadField::new(-1).expect("D = -1 is valid")
    }

    pub fn all() -> Vec<ImagQuadField> {
        CLASS_NUMBER_ONE.iter().map(|&d| ImagQuadField::new(d).unwrap()).collect()
    }

    /// Squarefree D.
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Field discriminant d_K.
    pub fn discriminant(&self) -> i64 {
        if self.trace == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    /// |𝒪_K^*|.
    pub fn unit_count(&self) -> usize {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// The quadratic character m ↦ (d_K / m).
    pub fn chi(&self, m: i64) -> i32 {
        kronecker_chi(self.discriminant(), m)
    }

    /// ω_D as a complex number.
    pub fn omega(&self) -> Complex64 {
        let s = (-self.d as f64).sqrt();
        if self.trace == 1 {
            Complex64::new(0.5, 0.5 * s)
        } else {
            Complex64::new(0.0, s)
        }
    }

    /// Area of a fundamental parallelogram of 𝒪_K in ℂ, √|d_K|/2.
    pub fn covolume(&self) -> f64 {
        (self.discriminant().abs() as f64).sqrt() / 2.0
    }

    pub fn to_complex(&self, a: AlgebraicInt) -> Complex64 {
        self.omega() * a.v as f64 + a.u as f64
    }

    pub fn norm(&self, a: AlgebraicInt) -> i64 {
        a.u * a.u + self.trace * a.u * a.v + self.norm * a.v * a.v
    }

    pub fn mul(&self, a: AlgebraicInt, b: AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt {
            u: a.u * b.u - self.norm * a.v * b.v,
            v: a.u * b.v + a.v * b.u + self.trace * a.v * b.v,
        }
    }

    pub fn add(&self, a: AlgebraicInt, b: AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt { u: a.u + b.u, v: a.v + b.v }
    }

    pub fn sub(&self, a: AlgebraicInt, b: AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt { u: a.u - b.u, v: a.v - b.v }
    }

    pub fn conj(&self, a: AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt { u: a.u + self.trace * a.v, v: -a.v }
    }

    /// Exact quotient b / a if a divides b.
    pub fn div_exact(&self, b: AlgebraicInt, a: AlgebraicInt) -> Option<AlgebraicInt> {
        if a.is_zero() {
            return None;
        }
        let n = self.norm(a);
        let p = self.mul(b, self.conj(a));
        if p.u % n == 0 && p.v % n == 0 {
            Some(AlgebraicInt { u: p.u / n, v: p.v / n })
        } else {
            None
        }
    }

    pub fn divides(&self, a: AlgebraicInt, b: AlgebraicInt) -> bool {
        self.div_exact(b, a).is_some()
    }

    /// The units of 𝒪_K, sorted by argument.
    pub fn units(&self) -> Vec<AlgebraicInt> {
        self.enumerate_by_norm(1).expect("Nmax = 1 is valid")
    }

    /// The associate of `a` whose argument lies in [0, 2π/w).
    pub fn canonical_associate(&self, a: AlgebraicInt) -> AlgebraicInt {
        if a.is_zero() {
            return a;
        }
        let sector = 2.0 * PI / self.unit_count() as f64;
        for unit in self.units() {
            let b = self.mul(a, unit);
            let arg = canonical_angle(self.to_complex(b));
            if arg < sector - 1e-12 {
                return b;
            }
        }
        unreachable!("some associate lies in the first sector")
    }

    /// All nonzero ω with N(ω) ≤ `n_max`, sorted by (norm, argument in [0, 2π)).
    pub fn enumerate_by_norm(&self, n_max: i64) -> Result<Vec<AlgebraicInt>> {
        if n_max < 1 {
            return usage("enumerate_by_norm: Nmax must be at least 1");
        }
        if n_max > NORM_CAP {
            return usage(format!("enumerate_by_norm: Nmax = {n_max} exceeds {NORM_CAP}"));
        }
        let dk = self.discriminant().abs();
        // 4N = (2u + t v)² + |d_K| v²
        let v_max = ((4 * n_max) as f64 / dk as f64).sqrt().floor() as i64 + 1;
        let mut out = Vec::new();
        for v in -v_max..=v_max {
            let rest = 4 * n_max - dk * v * v;
            if rest < 0 {
                continue;
            }
            let w = (rest as f64).sqrt().floor() as i64 + 1;
            // |2u + t v| ≤ w
            let lo = (-w - self.trace * v).div_euclid(2) - 1;
            let hi = (w - self.trace * v).div_euclid(2) + 1;
            for u in lo..=hi {
                let a = AlgebraicInt { u, v };
                let n = self.norm(a);
                if n >= 1 && n <= n_max {
                    out.push(a);
                }
            }
        }
        let mut keyed: Vec<(i64, f64, AlgebraicInt)> = out
            .into_iter()
            .map(|a| (self.norm(a), canonical_angle(self.to_complex(a)), a))
            .collect();
        keyed.sort_by(|x, y| {
            x.0.cmp(&y.0)
                .then(x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal))
                .then(x.2.cmp(&y.2))
        });
        Ok(keyed.into_iter().map(|k| k.2).collect())
    }

    /// Prime elements above the rational prime p (one per prime ideal, up to units).
    pub fn primes_above(&self, p: i64) -> Vec<AlgebraicInt> {
        match self.chi(p) {
            -1 => vec![AlgebraicInt::new(p, 0)],
            c => {
                let pi = self.element_of_norm(p).expect("split or ramified prime has an element of norm p");
                if c == 0 {
                    vec![pi]
                } else {
                    vec![pi, self.conj(pi)]
                }
            }
        }
    }

    /// Some element of norm m, found through 4m = (2u + tv)² + |D|v².
    fn element_of_norm(&self, m: i64) -> Option<AlgebraicInt> {
        let disc = -self.discriminant();
        let mut v = 0;
        while disc * v * v <= 4 * m {
            let rest = 4 * m - disc * v * v;
            let r = isqrt(rest);
            if r * r == rest && (r - self.trace * v) % 2 == 0 {
                return Some(AlgebraicInt::new((r - self.trace * v) / 2, v));
            }
            v += 1;
        }
        None
    }

    /// Prime factorisation of ω as (prime element, exponent) pairs, up to a unit.
    pub fn factor(&self, omega: AlgebraicInt) -> Result<Vec<(AlgebraicInt, u32)>> {
        if omega.is_zero() {
            return domain("factor: ω = 0");
        }
        let mut out = Vec::new();
        let mut rest = omega;
        for (p, _) in factor_integer(self.norm(omega)) {
            for pi in self.primes_above(p) {
                let mut e = 0;
                while let Some(q) = self.div_exact(rest, pi) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((pi, e));
                }
            }
        }
        debug_assert_eq!(self.norm(rest), 1);
        Ok(out)
    }

    /// True if a and b share no prime factor (gcd is a unit).
    pub fn coprime(&self, a: AlgebraicInt, b: AlgebraicInt) -> bool {
        if a.is_zero() {
            return self.norm(b) == 1;
        }
        if b.is_zero() {
            return self.norm(a) == 1;
        }
        let g = gcd(self.norm(a), self.norm(b));
        if g == 1 {
            return true;
        }
        for (p, _) in factor_integer(g) {
            for pi in self.primes_above(p) {
                if self.divides(pi, a) && self.divides(pi, b) {
                    return false;
                }
            }
        }
        true
    }
}

fn canonical_angle(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    let a = if a < 0.0 { a + 2.0 * PI } else { a };
    // snap values within rounding of 2π back to 0
    if (2.0 * PI - a) < 1e-12 {
        0.0
    } else {
        a
    }
}

/// Generalised divisor function σ_s(ω) = (1/|𝒪_K^*|) Σ_{d | ω} |d|^{2s},
/// computed from the prime factorisation of ω.
pub fn divisor_sigma(field: &ImagQuadField, s: Complex64, omega: AlgebraicInt) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (pi, e) in field.factor(omega)? {
        let q = Complex64::new(field.norm(pi) as f64, 0.0).ln() * s;
        let x = q.exp();
        let mut local = Complex64::new(1.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for _ in 0..e {
            pw *= x;
            local += pw;
        }
        acc *= local;
    }
    Ok(acc)
}

/// A positive definite integral binary quadratic form ax² + bxy + cy².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || b * b - 4 * a * c >= 0 {
            return usage(format!("form ({a}, {b}, {c}) is not positive definite"));
        }
        Ok(BinaryQuadraticForm { a, b, c })
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// Δ = (4ac − b²)/4.
    pub fn determinant(&self) -> f64 {
        -(self.discriminant() as f64) / 4.0
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.a as f64 * x * x + self.b as f64 * x * y + self.c as f64 * y * y
    }
}

/// r_Q(m) = #{(x, y) ∈ ℤ² : Q(x, y) = m}.
pub fn repr_count(q: &BinaryQuadraticForm, m: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    if m == 0 {
        return 1;
    }
    let disc = -q.discriminant();
    // 4aQ = (2ax + by)² + |disc|·y²
    let y_max = ((4 * q.a * m) as f64 / disc as f64).sqrt().floor() as i64 + 1;
    let mut count = 0;
    for y in -y_max..=y_max {
        let rest = 4 * q.a * m - disc * y * y;
        if rest < 0 {
            continue;
        }
        let r = isqrt(rest);
        if r * r != rest {
            continue;
        }
        for w in if r == 0 { vec![0] } else { vec![r, -r] } {
            let num = w - q.b * y;
            if num % (2 * q.a) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Kronecker symbol (d_K / m) for m ≥ 1.
pub fn kronecker_chi(d: i64, m: i64) -> i32 {
    assert!(m >= 1, "kronecker_chi: m must be positive");
    let mut m = m;
    let mut result = 1;
    while m % 2 == 0 {
        m /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0,
        };
    }
    result * jacobi(d, m)
}

/// Jacobi symbol (a / n) for odd n ≥ 1.
fn jacobi(a: i64, n: i64) -> i32 {
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Trial-division factorisation of n ≥ 1 into (prime, exponent).
pub fn factor_integer(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl std::fmt::Display for AlgebraicInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}ω", self.u, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn brute_sigma(field: &ImagQuadField, s: Complex64, omega: AlgebraicInt) -> Complex64 {
        let n = field.norm(omega);
        let mut acc = Complex64::new(0.0, 0.0);
        for d in field.enumerate_by_norm(n).unwrap() {
            if field.divides(d, omega) {
                acc += (Complex64::new(field.norm(d) as f64, 0.0).ln() * s).exp();
            }
        }
        acc / field.unit_count() as f64
    }

    #[test]
    fn unit_counts_and_discriminants() {
        let f = ImagQuadField::new(-1).unwrap();
        assert_eq!((f.unit_count(), f.discriminant()), (4, -4));
        let f = ImagQuadField::new(-3).unwrap();
        assert_eq!((f.unit_count(), f.discriminant()), (6, -3));
        let f = ImagQuadField::new(-2).unwrap();
        assert_eq!((f.unit_count(), f.discriminant()), (2, -8));
        assert!(ImagQuadField::new(-5).is_err());
        for f in ImagQuadField::all() {
            assert_eq!(f.units().len(), f.unit_count());
        }
    }

    #[test]
    fn gaussian_enumeration() {
        let f = ImagQuadField::gaussian();
        let list = f.enumerate_by_norm(5).unwrap();
        assert_eq!(list.len(), 20);
        let norms: Vec<i64> = list.iter().map(|&a| f.norm(a)).collect();
        for (n, k) in [(1, 4), (2, 4), (4, 4), (5, 8)] {
            assert_eq!(norms.iter().filter(|&&m| m == n).count(), k);
        }
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sqrt_minus_two_small_norms() {
        let f = ImagQuadField::new(-2).unwrap();
        let list = f.enumerate_by_norm(2).unwrap();
        let set: Vec<AlgebraicInt> = list;
        assert_eq!(set.len(), 4);
        for a in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!(set.contains(&AlgebraicInt::new(a.0, a.1)));
        }
    }

    #[test]
    fn enumeration_guard() {
        let f = ImagQuadField::gaussian();
        assert!(matches!(f.enumerate_by_norm(0), Err(Error::Usage(_))));
        assert!(matches!(f.enumerate_by_norm(NORM_CAP + 1), Err(Error::Usage(_))));
    }

    #[test]
    fn sigma_small_cases() {
        let f = ImagQuadField::gaussian();
        let one_plus_i = AlgebraicInt::new(1, 1);
        let s0 = divisor_sigma(&f, Complex64::new(0.0, 0.0), one_plus_i).unwrap();
        assert_eq!(s0, Complex64::new(2.0, 0.0));
        let s1 = divisor_sigma(&f, Complex64::new(1.0, 0.0), one_plus_i).unwrap();
        assert_eq!(s1, Complex64::new(3.0, 0.0));
        for u in f.units() {
            let v = divisor_sigma(&f, Complex64::new(0.7, 3.0), u).unwrap();
            assert_eq!(v, Complex64::new(1.0, 0.0));
        }
        assert!(matches!(
            divisor_sigma(&f, Complex64::new(1.0, 0.0), AlgebraicInt::ZERO),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sigma_matches_brute_force_small() {
        for f in ImagQuadField::all() {
            for omega in f.enumerate_by_norm(60).unwrap() {
                for s in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(-0.5, 2.0)] {
                    let a = divisor_sigma(&f, s, omega).unwrap();
                    let b = brute_sigma(&f, s, omega);
                    assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "{} {omega} {s}", f.d());
                }
            }
        }
    }

    #[test]
    fn representation_counts() {
        let q = BinaryQuadraticForm::new(1, 0, 1).unwrap();
        assert_eq!(repr_count(&q, 1), 4);
        assert_eq!(repr_count(&q, 3), 0);
        assert_eq!(repr_count(&q, 5), 8);
        assert_eq!(repr_count(&q, 25), 12);
        let q = BinaryQuadraticForm::new(1, 1, 1).unwrap();
        assert_eq!(repr_count(&q, 1), 6);
        assert_eq!(repr_count(&q, 7), 12);
        assert!(BinaryQuadraticForm::new(1, 3, 1).is_err());
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker_chi(-4, 2), 0);
        assert_eq!(kronecker_chi(-4, 3), -1);
        assert_eq!(kronecker_chi(-4, 5), 1);
        assert_eq!(kronecker_chi(-3, 2), -1);
        assert_eq!(kronecker_chi(-7, 2), 1);
        assert_eq!(kronecker_chi(-8, 3), 1);
        assert_eq!(kronecker_chi(-8, 5), -1);
        assert_eq!(kronecker_chi(-163, 41), 1);
    }

    #[test]
    fn factorisation_round_trip() {
        let f = ImagQuadField::new(-7).unwrap();
        for omega in f.enumerate_by_norm(200).unwrap() {
            let mut prod = AlgebraicInt::ONE;
            for (pi, e) in f.factor(omega).unwrap() {
                for _ in 0..e {
                    prod = f.mul(prod, pi);
                }
            }
            let q = f.div_exact(omega, prod).unwrap();
            assert_eq!(f.norm(q), 1);
        }
    }
}
