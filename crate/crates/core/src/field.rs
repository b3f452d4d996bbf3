//! Arithmetic in F_{q^2} together with its distinguished subfield F_q.
//!
//! Elements are identified by integer encodings: the residue with power-basis
//! coefficients c_0, ..., c_{2n-1} over F_p has encoding sum of c_i * p^i.
//! The modulus is the monic primitive polynomial of degree 2n whose encoding
//! is smallest, so every (p, n) determines one canonical field and encodings
//! are portable across runs. Multiplication, inversion, powers, and the
//! Frobenius x -> x^q all run on exp/log tables keyed to the generator g,
//! the residue class of the indeterminate.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order q^2.
pub const TABLE_BUDGET: u64 = 1 << 20;

/// An element of F_{q^2}, held by its integer encoding.
///
/// Values are produced by [`FieldCtx`] methods and are only meaningful for
/// the context that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The integer encoding of this element.
    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A fully tabulated instance of F_{q^2} with q = p^n.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    q2: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
    subfield: Vec<u32>,
    in_subfield: Vec<bool>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= m as u64 {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Builds F_{q^2} for q = p^n.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::Precondition(
                "extension degree n must be positive".into(),
            ));
        }
        let deg = 2 * n;
        let mut order: u128 = 1;
        for _ in 0..deg {
            order *= p as u128;
        }
        if order > TABLE_BUDGET as u128 {
            return Err(Error::BudgetExceeded {
                q2: order,
                budget: TABLE_BUDGET,
            });
        }
        let q2 = order as u32;
        let q = {
            let mut v = 1u32;
            for _ in 0..n {
                v *= p;
            }
            v
        };

        for tail_enc in 1..q2 {
            if tail_enc % p == 0 {
                continue;
            }
            if let Some((exp, log)) = try_modulus(p, deg, q2, tail_enc) {
                let mut modulus = digits(tail_enc, p, deg as usize);
                modulus.push(1);

                let m = (q2 - 1) as u64;
                let mut frob = vec![0u32; q2 as usize];
                for enc in 1..q2 {
                    let k = (log[enc as usize] as u64 * q as u64) % m;
                    frob[enc as usize] = exp[k as usize];
                }

                let mut subfield = Vec::with_capacity(q as usize);
                let mut in_subfield = vec![false; q2 as usize];
                for enc in 0..q2 {
                    if frob[enc as usize] == enc {
                        subfield.push(enc);
                        in_subfield[enc as usize] = true;
                    }
                }
                debug_assert_eq!(subfield.len(), q as usize);

                return Ok(FieldCtx {
                    p,
                    n,
                    q,
                    q2,
                    modulus,
                    exp,
                    log,
                    frob,
                    subfield,
                    in_subfield,
                });
            }
        }
        Err(Error::NoPrimitiveModulus { p, deg })
    }

    /// Builds F_{q^2} from a prime power q.
    pub fn from_q(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q as u64));
        }
        let mut p = 2;
        while !q.is_multiple_of(p) {
            p += 1;
        }
        let mut n = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            n += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q as u64));
        }
        Self::new(p, n)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn q2(&self) -> u32 {
        self.q2
    }

    /// Coefficients of the modulus, constant term first, leading 1 last.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The residue class of the indeterminate, a generator of the
    /// multiplicative group.
    pub fn generator(&self) -> Elem {
        Elem(self.p)
    }

    /// Validates an integer encoding and wraps it.
    pub fn elem(&self, encoding: u32) -> Result<Elem> {
        if encoding < self.q2 {
            Ok(Elem(encoding))
        } else {
            Err(Error::InvalidEncoding {
                encoding,
                q2: self.q2,
            })
        }
    }

    /// All field elements in encoding order.
    pub fn elems(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q2).map(Elem)
    }

    /// The elements of F_q in encoding order.
    pub fn subfield_elems(&self) -> impl Iterator<Item = Elem> + '_ {
        self.subfield.iter().map(|&e| Elem(e))
    }

    /// The image of an integer in the prime field.
    pub fn embed_int(&self, k: i64) -> Elem {
        Elem((k.rem_euclid(self.p as i64)) as u32)
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.p == 2 {
            return Elem(x.0 ^ y.0);
        }
        let p = self.p;
        let (mut x, mut y) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 || y != 0 {
            out += (x % p + y % p) % p * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Elem(out)
    }

    pub fn neg(&self, x: Elem) -> Elem {
        if self.p == 2 {
            return x;
        }
        let p = self.p;
        let mut x = x.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 {
            out += (p - x % p) % p * place;
            x /= p;
            place *= p;
        }
        Elem(out)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        let m = (self.q2 - 1) as u64;
        let k = (self.log[x.0 as usize] as u64 + self.log[y.0 as usize] as u64) % m;
        Elem(self.exp[k as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let m = (self.q2 - 1) as u64;
        let k = (m - self.log[x.0 as usize] as u64) % m;
        Ok(Elem(self.exp[k as usize]))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e for any integer exponent; negative exponents require x != 0.
    pub fn pow(&self, x: Elem, e: i64) -> Result<Elem> {
        if x.0 == 0 {
            return if e > 0 {
                Ok(Elem::ZERO)
            } else if e == 0 {
                Ok(Elem::ONE)
            } else {
                Err(Error::ZeroToNegativePower)
            };
        }
        let m = (self.q2 - 1) as i128;
        let k = (self.log[x.0 as usize] as i128 * e as i128).rem_euclid(m);
        Ok(Elem(self.exp[k as usize]))
    }

    pub(crate) fn pow_u(&self, x: Elem, e: u64) -> Elem {
        if x.0 == 0 {
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let m = (self.q2 - 1) as u64;
        let k = (self.log[x.0 as usize] as u64 % m) as u128 * (e % m) as u128 % m as u128;
        Elem(self.exp[k as usize])
    }

    /// The field automorphism x -> x^q.
    pub fn frobenius(&self, x: Elem) -> Elem {
        Elem(self.frob[x.0 as usize])
    }

    pub fn is_in_subfield(&self, x: Elem) -> bool {
        self.in_subfield[x.0 as usize]
    }

    /// Relative trace F_{q^2} -> F_q, x + x^q.
    pub fn trace_to_subfield(&self, x: Elem) -> Elem {
        self.add(x, self.frobenius(x))
    }

    /// Relative norm F_{q^2} -> F_q, x^{q+1}.
    pub fn norm_to_subfield(&self, x: Elem) -> Elem {
        self.mul(x, self.frobenius(x))
    }

    /// Whether c, which must lie in F_q, is a square in F_q.
    ///
    /// Zero counts as a square. For even q every element is a square.
    pub fn is_square_fq(&self, c: Elem) -> Result<bool> {
        if !self.is_in_subfield(c) {
            return Err(Error::NotInSubfield { encoding: c.0 });
        }
        Ok(self.is_square_fq_unchecked(c))
    }

    pub(crate) fn is_square_fq_unchecked(&self, c: Elem) -> bool {
        if c.0 == 0 || self.p == 2 {
            return true;
        }
        self.pow_u(c, ((self.q - 1) / 2) as u64) == Elem::ONE
    }

    /// Absolute trace F_q -> F_p of an element of F_q, as an integer in [0, p).
    pub fn abs_trace(&self, c: Elem) -> Result<u32> {
        if !self.is_in_subfield(c) {
            return Err(Error::NotInSubfield { encoding: c.0 });
        }
        Ok(self.abs_trace_unchecked(c))
    }

    pub(crate) fn abs_trace_unchecked(&self, c: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        let mut t = c;
        for _ in 0..self.n {
            acc = self.add(acc, t);
            t = self.pow_u(t, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }
}

fn digits(mut e: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = e % p;
        e /= p;
    }
    out
}

/// Tabulates powers of x modulo x^deg + tail. Returns None unless x has
/// multiplicative order exactly q2 - 1, which forces the modulus to be
/// primitive (the q2 - 1 distinct powers of x exhaust the nonzero residues,
/// so the quotient is a field and x generates its multiplicative group).
fn try_modulus(p: u32, deg: u32, q2: u32, tail_enc: u32) -> Option<(Vec<u32>, Vec<u32>)> {
    let deg = deg as usize;
    let tail = digits(tail_enc, p, deg);
    let neg_tail: Vec<u32> = tail.iter().map(|&d| (p - d) % p).collect();
    let places: Vec<u32> = {
        let mut v = Vec::with_capacity(deg);
        let mut place = 1u32;
        for _ in 0..deg {
            v.push(place);
            place *= p;
        }
        v
    };

    let mut exp = vec![0u32; (q2 - 1) as usize];
    let mut log = vec![u32::MAX; q2 as usize];
    let mut cur = vec![0u32; deg];
    cur[0] = 1;

    for k in 0..(q2 - 1) {
        let enc: u32 = cur.iter().zip(&places).map(|(&c, &pl)| c * pl).sum();
        if enc == 1 && k > 0 {
            return None;
        }
        exp[k as usize] = enc;
        log[enc as usize] = k;

        let top = cur[deg - 1];
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..deg {
                cur[i] = (cur[i] + top * neg_tail[i]) % p;
            }
        }
    }

    let final_enc: u32 = cur.iter().zip(&places).map(|(&c, &pl)| c * pl).sum();
    if final_enc != 1 {
        return None;
    }
    Some((exp, log))
}
