//! Exact characteristic polynomials of integer and rational matrices.
//!
//! `char_poly(A) = det(x·Id - A)`, monic of degree n, computed exactly.
//!
//! Two independent routes:
//!
//! * [`charpoly_int`] — production path: Hessenberg reduction modulo a
//!   deterministic sequence of 62-bit primes (Montgomery arithmetic),
//!   recombined by CRT.  The number of primes is chosen from a rigorous
//!   a-priori coefficient bound (Hadamard-type: the degree-(n-k)
//!   coefficient is a signed sum of `C(n,k)` k×k minors, each at most the
//!   product of the k largest column norms), so the reconstruction is
//!   provably exact — no probabilistic shortcuts.
//! * [`charpoly_berkowitz`] — division-free O(n⁴) big-integer algorithm,
//!   used as the cross-check oracle on small matrices.
//!
//! Rational matrices are scaled by the common denominator `d`:
//! `char_A(x) = d^{-n} · char_{dA}(d·x)`.

use crate::{Int, IntegerMatrix, Rat, RationalMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A monic polynomial with exact rational coefficients, ascending order
/// (`coeffs[i]` is the coefficient of `x^i`; `coeffs[degree] = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<Rat>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a characteristic polynomial is monic");
        assert!(coeffs.last().unwrap().is_one(), "leading coefficient must be 1");
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients, `coeffs()[i]` multiplying `x^i`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluate at a square rational matrix (Cayley–Hamilton checks).
    pub fn eval_matrix(&self, a: &RationalMatrix) -> RationalMatrix {
        assert!(a.is_square());
        let n = a.rows();
        let mut acc = RationalMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a);
            for i in 0..n {
                acc[(i, i)] += c.clone();
            }
        }
        acc
    }
}

impl fmt::Display for CharPoly {
    /// Human-readable form like `x^3 - 4*x^2 + 11/2*x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if !unit_mag || i == 0 {
                write!(f, "{mag}")?;
            }
            if i > 0 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Montgomery arithmetic and deterministic primes
// ---------------------------------------------------------------------------

/// Montgomery multiplication context for an odd prime `p < 2^63`.
#[derive(Clone, Copy)]
struct Mont {
    p: u64,
    ninv: u64, // -p^{-1} mod 2^64
    r2: u64,   // 2^128 mod p
}

impl Mont {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < (1 << 63));
        // Newton iteration for p^{-1} mod 2^64.
        let mut x: u64 = 1;
        for _ in 0..6 {
            x = x.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(x)));
        }
        let ninv = x.wrapping_neg();
        let r = ((u128::from(u64::MAX) + 1) % u128::from(p)) as u64; // 2^64 mod p
        let r2 = ((u128::from(r) * u128::from(r)) % u128::from(p)) as u64;
        Mont { p, ninv, r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let t2 = (t + u128::from(m) * u128::from(self.p)) >> 64;
        let r = t2 as u64;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(u128::from(a) * u128::from(b))
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(&self, x: u64) -> u64 {
        self.mul(x, self.r2)
    }

    fn from_mont(&self, x: u64) -> u64 {
        self.redc(u128::from(x))
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse in the Montgomery domain (input and output in-domain).
    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn pow_mod_u128(mut base: u128, mut e: u128, m: u128) -> u128 {
    let mut acc: u128 = 1;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64 (the listed bases are a proven
/// complete witness set below 2^64).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(u128::from(a), u128::from(d), u128::from(n));
        if x == 1 || x == u128::from(n - 1) {
            continue;
        }
        for _ in 0..s - 1 {
            x = x * x % u128::from(n);
            if x == u128::from(n - 1) {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic descending sequence of 62-bit primes.
fn prime_stream() -> impl Iterator<Item = u64> {
    let start = (1u64 << 62) - 1;
    (0..).map(move |k| start - 2 * k).filter(|&n| is_prime_u64(n))
}

// ---------------------------------------------------------------------------
// Coefficient bound
// ---------------------------------------------------------------------------

/// A bound `B` (returned squared) with `|c_k| <= B` for every coefficient
/// of det(x·Id - A): the squared maximum over k of C(n,k)² · (product of
/// the k largest column norms squared).
fn coeff_bound_squared(a: &IntegerMatrix) -> Int {
    let n = a.rows();
    let mut norms_sq: Vec<Int> = (0..n)
        .map(|j| (0..n).map(|i| &a[(i, j)] * &a[(i, j)]).sum())
        .collect();
    norms_sq.sort_unstable_by(|x, y| y.cmp(x));
    // Hadamard needs norm >= 1 per picked column to stay monotone; clamp.
    for x in norms_sq.iter_mut() {
        if x.is_zero() {
            *x = Int::one();
        }
    }
    let mut best = Int::one(); // k = 0 term
    let mut binom = Int::one();
    let mut prefix = Int::one();
    for k in 1..=n {
        binom = binom * Int::from(n - k + 1) / Int::from(k);
        prefix *= &norms_sq[k - 1];
        let cand = &binom * &binom * &prefix;
        if cand > best {
            best = cand;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Modular Hessenberg characteristic polynomial
// ---------------------------------------------------------------------------

/// Characteristic polynomial of `h` (row-major n×n, Montgomery domain)
/// mod p, ascending coefficients in the Montgomery domain.
fn charpoly_hessenberg_mod(mont: &Mont, h: &[u64], n: usize) -> Vec<u64> {
    let one = mont.to_mont(1);
    // q[m] = charpoly of the leading m×m block, ascending, length m+1.
    let mut q: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    q.push(vec![one]);
    for m in 1..=n {
        let prev = &q[m - 1];
        let mut cur = vec![0u64; m + 1];
        // (x - h[m-1][m-1]) * prev
        for (i, &c) in prev.iter().enumerate() {
            cur[i + 1] = mont.add(cur[i + 1], c);
            let t = mont.mul(h[(m - 1) * n + (m - 1)], c);
            cur[i] = mont.sub(cur[i], t);
        }
        // - sum over i of h[i][m-1] * (prod of subdiagonal below i) * q[i]
        let mut prod = one;
        for i in (0..m - 1).rev() {
            // prod = h[i+1][i] * h[i+2][i+1] * ... * h[m-1][m-2]
            prod = mont.mul(prod, h[(i + 1) * n + i]);
            if prod == 0 {
                break;
            }
            let hcoef = h[i * n + (m - 1)];
            if hcoef == 0 {
                continue;
            }
            let factor = mont.mul(hcoef, prod);
            for (j, &c) in q[i].iter().enumerate() {
                let t = mont.mul(factor, c);
                cur[j] = mont.sub(cur[j], t);
            }
        }
        q.push(cur);
    }
    q.pop().unwrap()
}

/// Reduce to Hessenberg form mod p in place (similarity transform, so the
/// characteristic polynomial is preserved).
fn hessenberg_mod(mont: &Mont, h: &mut [u64], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i * n + k] != 0) else {
            continue;
        };
        if piv != k + 1 {
            for j in 0..n {
                h.swap(piv * n + j, (k + 1) * n + j);
            }
            for i in 0..n {
                h.swap(i * n + piv, i * n + (k + 1));
            }
        }
        let inv = mont.inv(h[(k + 1) * n + k]);
        for i in k + 2..n {
            let x = h[i * n + k];
            if x == 0 {
                continue;
            }
            let f = mont.mul(x, inv);
            // row_i -= f * row_{k+1}  (columns before k are already zero)
            let (upper, lower) = h.split_at_mut(i * n);
            let row_k1 = &upper[(k + 1) * n..(k + 2) * n];
            let row_i = &mut lower[..n];
            for j in k..n {
                let t = mont.mul(f, row_k1[j]);
                row_i[j] = mont.sub(row_i[j], t);
            }
            // col_{k+1} += f * col_i
            for r in 0..n {
                let t = mont.mul(f, h[r * n + i]);
                h[r * n + (k + 1)] = mont.add(h[r * n + (k + 1)], t);
            }
        }
    }
}

/// Exact characteristic polynomial `det(x·Id - a)` of an integer matrix,
/// ascending coefficients, `result[n] = 1`.
pub fn charpoly_int(a: &IntegerMatrix) -> Vec<Int> {
    assert!(a.is_square(), "characteristic polynomial needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return vec![Int::one()];
    }

    // Modulus target: product of primes must exceed twice the bound.
    let bound_sq = coeff_bound_squared(a);
    let four_bound_sq = Int::from(4) * bound_sq;

    // Small fast path for entry reduction when everything fits in i64.
    let small: Option<Vec<i64>> = a.entries().map(|x| x.to_i64()).collect();

    let mut residues: Vec<Vec<u64>> = Vec::new(); // per prime: ascending coeffs (plain domain)
    let mut primes: Vec<u64> = Vec::new();
    let mut modulus_sq = Int::one();
    for p in prime_stream() {
        let mont = Mont::new(p);
        let mut h = vec![0u64; n * n];
        match &small {
            Some(v) => {
                for (idx, &x) in v.iter().enumerate() {
                    let r = x.rem_euclid(p as i64) as u64;
                    h[idx] = mont.to_mont(r);
                }
            }
            None => {
                let pb = Int::from(p);
                for i in 0..n {
                    for j in 0..n {
                        let r = a[(i, j)].mod_floor(&pb).to_u64().unwrap();
                        h[i * n + j] = mont.to_mont(r);
                    }
                }
            }
        }
        hessenberg_mod(&mont, &mut h, n);
        let coeffs = charpoly_hessenberg_mod(&mont, &h, n);
        residues.push(coeffs.iter().map(|&c| mont.from_mont(c)).collect());
        primes.push(p);
        let pi = Int::from(p);
        modulus_sq *= &pi * &pi;
        if modulus_sq > four_bound_sq {
            break;
        }
    }

    // CRT per coefficient, then map into the symmetric range.
    let modulus: Int = primes.iter().map(|&p| Int::from(p)).product();
    let half = &modulus / Int::from(2);
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut x = Int::zero();
        let mut m_acc = Int::one();
        for (res, &p) in residues.iter().zip(&primes) {
            let pi = Int::from(p);
            // x ≡ current solution mod m_acc; lift to mod m_acc * p.
            let r = Int::from(res[k]);
            let x_mod_p = x.mod_floor(&pi);
            let diff = (r - x_mod_p).mod_floor(&pi);
            let m_inv = mod_inverse(&m_acc, &pi);
            let t = (diff * m_inv).mod_floor(&pi);
            x += &m_acc * t;
            m_acc *= &pi;
        }
        if x > half {
            x -= &modulus;
        }
        out.push(x);
    }
    debug_assert!(out[n].is_one(), "characteristic polynomial must be monic");
    out
}

/// Inverse of `a` modulo prime `p` (both positive, `gcd(a, p) = 1`).
fn mod_inverse(a: &Int, p: &Int) -> Int {
    let e = p - Int::from(2);
    mod_pow(&a.mod_floor(p), &e, p)
}

fn mod_pow(base: &Int, exp: &Int, m: &Int) -> Int {
    let mut acc = Int::one();
    let mut b = base.clone();
    let (_, bits) = exp.to_radix_le(2);
    for bit in bits {
        if bit == 1 {
            acc = (&acc * &b).mod_floor(m);
        }
        b = (&b * &b).mod_floor(m);
    }
    acc
}

/// Division-free Berkowitz characteristic polynomial (oracle path),
/// ascending coefficients of det(x·Id - a).
pub fn charpoly_berkowitz(a: &IntegerMatrix) -> Vec<Int> {
    assert!(a.is_square());
    let n = a.rows();
    // c: descending coefficients of the leading principal block's
    // characteristic polynomial, starting from the empty block.
    let mut c: Vec<Int> = vec![Int::one()];
    for k in 0..n {
        // Toeplitz generator for the (k+1)×(k+1) block:
        // [1, -a_kk, -(R C), -(R M C), -(R M² C), ...] where R is the row
        // prefix a[k][0..k], C the column prefix a[0..k][k], M the k×k block.
        let mut gen: Vec<Int> = Vec::with_capacity(k + 2);
        gen.push(Int::one());
        gen.push(-a[(k, k)].clone());
        if k > 0 {
            let mut w: Vec<Int> = (0..k).map(|i| a[(i, k)].clone()).collect();
            for step in 0..k {
                let dot: Int = (0..k).map(|j| &a[(k, j)] * &w[j]).sum();
                gen.push(-dot);
                if step + 1 < k {
                    let mut nw = vec![Int::zero(); k];
                    for (i, nwi) in nw.iter_mut().enumerate() {
                        for j in 0..k {
                            *nwi += &a[(i, j)] * &w[j];
                        }
                    }
                    w = nw;
                }
            }
        }
        // c_new = gen (*) c, truncated to degree k+1.
        let mut nc = vec![Int::zero(); k + 2];
        for (i, g) in gen.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            for (j, cc) in c.iter().enumerate() {
                if i + j < k + 2 {
                    nc[i + j] += g * cc;
                }
            }
        }
        c = nc;
    }
    c.reverse();
    c
}

/// Exact characteristic polynomial of a rational matrix.
pub fn charpoly_rational(a: &RationalMatrix) -> CharPoly {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return CharPoly::from_coeffs(vec![Rat::one()]);
    }
    // Common denominator d, then char_A(x) = d^{-n} char_{dA}(d x).
    let mut d = Int::one();
    for x in a.entries() {
        d = d.lcm(x.denom());
    }
    let b: IntegerMatrix = a.map(|x| {
        let scaled = x * Rat::from_integer(d.clone());
        debug_assert!(scaled.denom().is_one());
        scaled.numer().clone()
    });
    let cb = charpoly_int(&b);
    // coefficient of x^j in char_A = cb[j] * d^j / d^n = cb[j] / d^(n-j)
    let coeffs = (0..=n)
        .map(|j| {
            Rat::new(
                cb[j].clone(),
                num_traits::pow::pow(d.clone(), n - j),
            )
        })
        .collect();
    CharPoly::from_coeffs(coeffs)
}
