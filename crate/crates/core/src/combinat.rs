//! Generalized binomial coefficients modulo a prime and the family of
//! binomial-sum identities behind the closed power-sum formulas.
//!
//! The central object is the truncated series
//! S_{u,v}(z) = sum over 0 <= l <= floor((q-u)/2) of
//! binom(l+v, v) * binom(-l, l+u) * z^l, an element of F_q. Each variant of
//! [`Identity`] pins S_{u,v} against an independent closed form on its own
//! admissible set of z.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// binom(m, k) mod p for 0 <= k <= m < p.
fn binom_digit(m: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((m - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * mod_pow(den, p - 2, p) % p
}

/// The generalized binomial coefficient t(t-1)...(t-k+1)/k! reduced mod p.
///
/// Negative t is handled by the reflection binom(t, k) =
/// (-1)^k binom(-t+k-1, k); the nonnegative case then reduces digit by digit
/// with Lucas' theorem.
pub fn gen_binom(t: i64, k: u32, p: u32) -> u32 {
    assert!(p >= 2, "modulus must be a prime");
    let pp = p as u64;
    let (top, negate) = if t < 0 {
        (-t + k as i64 - 1, k % 2 == 1 && p != 2)
    } else {
        (t, false)
    };
    if top < k as i64 {
        return 0;
    }
    let mut m = top as u64;
    let mut kk = k as u64;
    let mut r = 1u64;
    while kk > 0 {
        let (md, kd) = (m % pp, kk % pp);
        if kd > md {
            return 0;
        }
        r = r * binom_digit(md, kd, pp) % pp;
        m /= pp;
        kk /= pp;
    }
    if negate {
        r = (pp - r) % pp;
    }
    r as u32
}

/// S_{u,v}(z): the truncated binomial sum with upper limit floor((q-u)/2).
pub fn binom_sum(ctx: &FieldCtx, u: u32, v: u32, z: Elem) -> Result<Elem> {
    if !ctx.is_in_subfield(z) {
        return Err(Error::NotInSubfield {
            encoding: z.encoding(),
        });
    }
    let p = ctx.p();
    let limit = (ctx.q() - u.min(ctx.q())) / 2;
    let mut acc = Elem::ZERO;
    let mut zl = Elem::ONE;
    for l in 0..=limit {
        let coeff = (gen_binom((l + v) as i64, v, p) as u64
            * gen_binom(-(l as i64), l + u, p) as u64
            % p as u64) as i64;
        if coeff != 0 {
            acc = ctx.add(acc, ctx.mul(ctx.embed_int(coeff), zl));
        }
        zl = ctx.mul(zl, z);
    }
    Ok(acc)
}

/// One pointwise-checkable identity for the sums S_{u,v}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// S_{0,0}(z) = (1 + (1+4z)^((q-1)/2)) / 2 for odd q and every z in F_q.
    Character,
    /// S_{0,0}(z) = -(r1^{q+1} - r2^{q+1})/(r1 - r2) where r1, r2 are the
    /// roots of x^2 + x - z in F_{q^2}; requires the quadratic separable.
    RootPair,
    /// S_{u,v}(z) equals a rational closed form whenever x^2 + x - z splits
    /// into distinct roots over F_q.
    Split { u: u8, v: u8 },
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::Character,
        Identity::RootPair,
        Identity::Split { u: 0, v: 0 },
        Identity::Split { u: 0, v: 1 },
        Identity::Split { u: 0, v: 2 },
        Identity::Split { u: 1, v: 0 },
        Identity::Split { u: 1, v: 1 },
        Identity::Split { u: 1, v: 2 },
    ];

    pub fn name(self) -> String {
        match self {
            Identity::Character => "character".into(),
            Identity::RootPair => "root-pair".into(),
            Identity::Split { u, v } => format!("split-u{u}-v{v}"),
        }
    }

    /// Whether the identity is asserted at this z.
    pub fn admissible(self, ctx: &FieldCtx, z: Elem) -> bool {
        if !ctx.is_in_subfield(z) {
            return false;
        }
        let odd = ctx.p() != 2;
        match self {
            Identity::Character => odd,
            Identity::RootPair => !odd || !disc_of_z(ctx, z).is_zero(),
            Identity::Split { u, v } => {
                let splits = if odd {
                    let d = disc_of_z(ctx, z);
                    !d.is_zero() && ctx.is_square_fq_unchecked(d)
                } else {
                    ctx.abs_trace_unchecked(z) == 0
                };
                splits && !(u == 1 && v == 0 && z.is_zero()) && !(v == 2 && ctx.q() == 2)
            }
        }
    }
}

/// Both sides of one identity evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: Elem,
    pub rhs: Elem,
}

fn disc_of_z(ctx: &FieldCtx, z: Elem) -> Elem {
    ctx.add(Elem::ONE, ctx.mul(ctx.embed_int(4), z))
}

/// The two roots of x^2 + x - z in F_{q^2}, when the quadratic is separable.
fn quadratic_roots(ctx: &FieldCtx, z: Elem) -> Option<(Elem, Elem)> {
    let mut found = [Elem::ZERO; 2];
    let mut count = 0;
    for r in ctx.elems() {
        if ctx.add(ctx.mul(r, r), ctx.sub(r, z)).is_zero() {
            found[count] = r;
            count += 1;
            if count == 2 {
                return Some((found[0], found[1]));
            }
        }
    }
    None
}

/// Evaluates one identity at z, returning both sides.
///
/// Errors if z is outside F_q or the identity's admissibility condition
/// fails there.
pub fn check_identity(ctx: &FieldCtx, id: Identity, z: Elem) -> Result<IdentityCheck> {
    if !ctx.is_in_subfield(z) {
        return Err(Error::NotInSubfield {
            encoding: z.encoding(),
        });
    }
    if !id.admissible(ctx, z) {
        return Err(Error::Precondition(format!(
            "identity {} is not asserted at z with encoding {}",
            id.name(),
            z.encoding()
        )));
    }
    let (lhs, rhs) = match id {
        Identity::Character => {
            let lhs = binom_sum(ctx, 0, 0, z)?;
            let chi = ctx.pow_u(disc_of_z(ctx, z), ((ctx.q() - 1) / 2) as u64);
            let rhs = ctx.div(ctx.add(Elem::ONE, chi), ctx.embed_int(2))?;
            (lhs, rhs)
        }
        Identity::RootPair => {
            let lhs = binom_sum(ctx, 0, 0, z)?;
            let (r1, r2) = quadratic_roots(ctx, z)
                .expect("separable quadratic must split over the quadratic extension");
            let e = (ctx.q() + 1) as i64;
            let num = ctx.sub(ctx.pow(r1, e)?, ctx.pow(r2, e)?);
            let rhs = ctx.neg(ctx.div(num, ctx.sub(r1, r2))?);
            (lhs, rhs)
        }
        Identity::Split { u, v } => {
            let lhs = binom_sum(ctx, u as u32, v as u32, z)?;
            let d = disc_of_z(ctx, z);
            let z2 = ctx.mul(z, z);
            let num = match (u, v) {
                (0, 0) | (1, 0) => Elem::ONE,
                (0, 1) => ctx.add(Elem::ONE, ctx.mul(ctx.embed_int(3), z)),
                (0, 2) => ctx.add(
                    Elem::ONE,
                    ctx.add(ctx.mul(ctx.embed_int(6), z), ctx.mul(ctx.embed_int(11), z2)),
                ),
                (1, 1) => ctx.mul(ctx.embed_int(2), z),
                (1, 2) => ctx.mul(
                    ctx.mul(ctx.embed_int(3), z),
                    ctx.add(Elem::ONE, ctx.mul(ctx.embed_int(2), z)),
                ),
                _ => {
                    return Err(Error::Precondition(format!(
                        "no closed form for split indices u={u} v={v}"
                    )))
                }
            };
            let den = match (u, v) {
                (0, 0) | (1, 0) => Elem::ONE,
                (0, 1) | (1, 1) => d,
                _ => ctx.mul(d, d),
            };
            (lhs, ctx.div(num, den)?)
        }
    };
    Ok(IdentityCheck {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}
