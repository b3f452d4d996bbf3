//! The sufficiency machinery for the fourth odd case and third even case:
//! coordinates of an instance in the basis {1, b}, the associated cubic in
//! one F_q variable, its discriminant, the quadratic form theta tying the
//! discriminant to the derivative, and the root-uniqueness sweep over all
//! target values w.

use serde::Serialize;

use crate::classify::{classify, CaseTag};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::trinomial::Trinomial;

/// Subfield coordinates of one instance-and-target configuration:
/// b^2 = c + d b, e = a / b^2, and w = u + v b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubicParams {
    pub c: Elem,
    pub d: Elem,
    pub e: Elem,
    pub u: Elem,
    pub v: Elem,
}

impl CubicParams {
    /// The leading coefficient -u - deu + v + cev of the associated cubic.
    /// It vanishes exactly when w lies on the line (a+b+1) F_q.
    pub fn epsilon(&self, ctx: &FieldCtx) -> Elem {
        let minus_u = ctx.neg(self.u);
        let t1 = ctx.neg(ctx.mul(self.d, ctx.mul(self.e, self.u)));
        let t2 = ctx.mul(self.c, ctx.mul(self.e, self.v));
        ctx.add(ctx.add(minus_u, t1), ctx.add(self.v, t2))
    }
}

/// A cubic g3 x^3 + g2 x^2 + g1 x + g0 over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cubic {
    pub g3: Elem,
    pub g2: Elem,
    pub g1: Elem,
    pub g0: Elem,
}

fn term(ctx: &FieldCtx, k: i64, factors: &[Elem]) -> Elem {
    let mut acc = ctx.embed_int(k);
    for &f in factors {
        acc = ctx.mul(acc, f);
    }
    acc
}

fn sum(ctx: &FieldCtx, terms: &[Elem]) -> Elem {
    let mut acc = Elem::ZERO;
    for &t in terms {
        acc = ctx.add(acc, t);
    }
    acc
}

/// Expresses an instance (a, b) and a target value w in subfield
/// coordinates: d and c come from the trace and norm of b, e = a/b^2, and
/// (u, v) are the coordinates of w in the basis {1, b}.
pub fn coords_from_instance(ctx: &FieldCtx, a: Elem, b: Elem, w: Elem) -> Result<CubicParams> {
    if ctx.is_in_subfield(b) {
        return Err(Error::BasisDegenerate {
            encoding: b.encoding(),
        });
    }
    let e = ctx
        .div(a, ctx.mul(b, b))
        .expect("b is outside F_q, hence nonzero");
    if !ctx.is_in_subfield(e) {
        return Err(Error::NotInSubfield {
            encoding: e.encoding(),
        });
    }
    let d = ctx.trace_to_subfield(b);
    let c = ctx.neg(ctx.norm_to_subfield(b));
    let bq = ctx.frobenius(b);
    let v = ctx
        .div(ctx.sub(w, ctx.frobenius(w)), ctx.sub(b, bq))
        .expect("b differs from its conjugate");
    let u = ctx.sub(w, ctx.mul(v, b));
    debug_assert!(ctx.is_in_subfield(u) && ctx.is_in_subfield(v));
    Ok(CubicParams { c, d, e, u, v })
}

/// Builds the cubic whose F_q roots correspond to preimages of w outside
/// F_q. Errors when the leading coefficient vanishes, which signals that w
/// lies on the line (a+b+1) F_q and is handled by the caller.
pub fn build_g(ctx: &FieldCtx, params: &CubicParams) -> Result<Cubic> {
    let eps = params.epsilon(ctx);
    if eps.is_zero() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let CubicParams { c, d, e, u, v } = *params;
    let g2 = sum(
        ctx,
        &[
            term(ctx, 3, &[u]),
            term(ctx, -1, &[d, u]),
            term(ctx, -1, &[c, e, u]),
            term(ctx, -2, &[d, d, e, u]),
            term(ctx, -1, &[c, v]),
            term(ctx, 3, &[d, v]),
            term(ctx, 2, &[c, d, e, v]),
        ],
    );
    let g1 = sum(
        ctx,
        &[
            term(ctx, 1, &[c, u]),
            term(ctx, 3, &[d, u]),
            term(ctx, -1, &[d, d, d, e, u]),
            term(ctx, 3, &[c, v]),
            term(ctx, -1, &[c, d, v]),
            term(ctx, 3, &[d, d, v]),
            term(ctx, -1, &[c, c, e, v]),
            term(ctx, 1, &[c, d, d, e, v]),
        ],
    );
    let g0 = sum(
        ctx,
        &[
            term(ctx, 1, &[c, u]),
            term(ctx, 1, &[d, d, u]),
            term(ctx, 1, &[c, c, e, u]),
            term(ctx, 1, &[c, d, d, e, u]),
            term(ctx, 1, &[c, c, v]),
            term(ctx, 2, &[c, d, v]),
            term(ctx, 1, &[d, d, d, v]),
            term(ctx, -1, &[c, c, d, e, v]),
        ],
    );
    Ok(Cubic {
        g3: eps,
        g2,
        g1,
        g0,
    })
}

/// The universal cubic discriminant
/// 18 g3 g2 g1 g0 - 4 g2^3 g0 + g2^2 g1^2 - 4 g3 g1^3 - 27 g3^2 g0^2,
/// valid in every characteristic.
pub fn disc_cubic(ctx: &FieldCtx, g: &Cubic) -> Result<Elem> {
    if g.g3.is_zero() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let Cubic { g3, g2, g1, g0 } = *g;
    Ok(sum(
        ctx,
        &[
            term(ctx, 18, &[g3, g2, g1, g0]),
            term(ctx, -4, &[g2, g2, g2, g0]),
            term(ctx, 1, &[g2, g2, g1, g1]),
            term(ctx, -4, &[g3, g1, g1, g1]),
            term(ctx, -27, &[g3, g3, g0, g0]),
        ],
    ))
}

fn check_theta_preconditions(ctx: &FieldCtx, params: &CubicParams) -> Result<()> {
    if ctx.p() == 2 {
        return Err(Error::Precondition(
            "the discriminant identities are asserted for odd q only".into(),
        ));
    }
    if params.e.is_zero() {
        return Err(Error::Precondition("e must be nonzero".into()));
    }
    let e2c = ctx.mul(ctx.mul(params.e, params.e), params.c);
    let want = ctx.sub(ctx.mul(ctx.embed_int(3), params.e), Elem::ONE);
    if e2c != want {
        return Err(Error::Precondition(
            "parameters must satisfy c = 3/e - 1/e^2".into(),
        ));
    }
    Ok(())
}

/// The quadratic form in (u, v) whose square carries the discriminant
/// factorization. Coefficients are polynomials in d and e, derived by exact
/// rational arithmetic from the derivative identity.
pub fn theta(ctx: &FieldCtx, params: &CubicParams) -> Result<Elem> {
    check_theta_preconditions(ctx, params)?;
    let CubicParams { d, e, u, v, .. } = *params;
    let uu = sum(
        ctx,
        &[
            term(ctx, 4, &[d, d, d, e, e, e, e, e]),
            term(ctx, 36, &[d, e, e, e, e]),
            term(ctx, -12, &[d, e, e, e]),
            term(ctx, 36, &[e, e, e]),
            term(ctx, -8, &[e, e]),
        ],
    );
    let uv = sum(
        ctx,
        &[
            term(ctx, -24, &[d, d, e, e, e, e]),
            term(ctx, 8, &[d, d, e, e, e]),
            term(ctx, 36, &[d, e, e, e]),
            term(ctx, -8, &[d, e, e]),
            term(ctx, -144, &[e, e, e]),
            term(ctx, 96, &[e, e]),
            term(ctx, -16, &[e]),
        ],
    );
    let vv = sum(
        ctx,
        &[
            term(ctx, 36, &[d, e, e, e]),
            term(ctx, -24, &[d, e, e]),
            term(ctx, 4, &[d, e]),
            term(ctx, -108, &[e, e]),
            term(ctx, 60, &[e]),
            term(ctx, -8, &[]),
        ],
    );
    Ok(sum(
        ctx,
        &[
            ctx.mul(uu, ctx.mul(u, u)),
            ctx.mul(uv, ctx.mul(u, v)),
            ctx.mul(vv, ctx.mul(v, v)),
        ],
    ))
}

/// Both sides of the two discriminant identities, in division-free form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscIdentities {
    pub factorization_holds: bool,
    pub factorization_lhs: Elem,
    pub factorization_rhs: Elem,
    pub derivative_holds: bool,
    pub derivative_lhs: Elem,
    pub derivative_rhs: Elem,
}

/// Checks, for odd q and c = 3/e - 1/e^2:
/// 16 e^8 disc(g) = (4c + d^2)(1 - 4e) theta^2, and
/// e^4 (a1^2 - 4 a2 a0) = (1 + de) theta for g' = a2 x^2 + a1 x + a0.
pub fn check_disc_identities(ctx: &FieldCtx, params: &CubicParams) -> Result<DiscIdentities> {
    check_theta_preconditions(ctx, params)?;
    let g = build_g(ctx, params)?;
    let disc = disc_cubic(ctx, &g)?;
    let th = theta(ctx, params)?;
    let CubicParams { c, d, e, .. } = *params;

    let e4 = ctx.pow(e, 4).expect("e is nonzero");
    let e8 = ctx.mul(e4, e4);
    let factorization_lhs = ctx.mul(ctx.embed_int(16), ctx.mul(e8, disc));
    let factorization_rhs = {
        let lead = ctx.add(ctx.mul(ctx.embed_int(4), c), ctx.mul(d, d));
        let one_minus_4e = ctx.sub(Elem::ONE, ctx.mul(ctx.embed_int(4), e));
        ctx.mul(lead, ctx.mul(one_minus_4e, ctx.mul(th, th)))
    };

    let a2 = ctx.mul(ctx.embed_int(3), g.g3);
    let a1 = ctx.mul(ctx.embed_int(2), g.g2);
    let a0 = g.g1;
    let derivative_lhs = ctx.mul(
        e4,
        ctx.sub(ctx.mul(a1, a1), ctx.mul(ctx.embed_int(4), ctx.mul(a2, a0))),
    );
    let derivative_rhs = ctx.mul(ctx.add(Elem::ONE, ctx.mul(d, e)), th);

    Ok(DiscIdentities {
        factorization_holds: factorization_lhs == factorization_rhs,
        factorization_lhs,
        factorization_rhs,
        derivative_holds: derivative_lhs == derivative_rhs,
        derivative_lhs,
        derivative_rhs,
    })
}

/// Number of distinct roots of g in F_q, by evaluation.
pub fn count_roots_fq(ctx: &FieldCtx, g: &Cubic) -> u32 {
    let mut count = 0;
    for t in ctx.subfield_elems() {
        let mut val = g.g3;
        for &coef in [g.g2, g.g1, g.g0].iter() {
            val = ctx.add(ctx.mul(val, t), coef);
        }
        if val.is_zero() {
            count += 1;
        }
    }
    count
}

/// Outcome of the root-uniqueness sweep over all w.
#[derive(Debug, Clone, Serialize)]
pub struct Uniqueness {
    pub ok: bool,
    pub counterexamples: Vec<u32>,
}

/// For an instance in the fourth odd case or third even case, sweeps every
/// w in F_{q^2}: off the line (a+b+1) F_q the associated cubic must have at
/// most one root in F_q; on the line the unique preimage must be
/// w/(a+b+1). Records every w violating its side.
pub fn uniqueness_property(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<Uniqueness> {
    let tag = classify(ctx, a, b).case_tag();
    if tag != Some(CaseTag::AIV) && tag != Some(CaseTag::BIII) {
        return Err(Error::Precondition(
            "the pair must be classified A.iv or B.iii".into(),
        ));
    }
    if ctx.is_in_subfield(b) {
        return Err(Error::BasisDegenerate {
            encoding: b.encoding(),
        });
    }
    let s = ctx.add(ctx.add(a, b), Elem::ONE);
    if s.is_zero() {
        return Err(Error::Precondition(
            "a + b + 1 vanishes for this pair".into(),
        ));
    }
    let s_inv = ctx.inv(s).expect("s is nonzero");

    let f = Trinomial::new(ctx, a, b);
    let mut preimages = vec![0u32; ctx.q2() as usize];
    for x in ctx.elems() {
        preimages[f.eval(x).encoding() as usize] += 1;
    }

    let mut counterexamples = Vec::new();
    for w in ctx.elems() {
        let params = coords_from_instance(ctx, a, b, w)?;
        let eps = params.epsilon(ctx);
        let t = ctx.mul(w, s_inv);
        let violated = if ctx.is_in_subfield(t) {
            !eps.is_zero() || preimages[w.encoding() as usize] != 1 || f.eval(t) != w
        } else if eps.is_zero() {
            true
        } else {
            let g = build_g(ctx, &params).expect("leading coefficient is nonzero");
            count_roots_fq(ctx, &g) > 1
        };
        if violated {
            counterexamples.push(w.encoding());
        }
    }
    Ok(Uniqueness {
        ok: counterexamples.is_empty(),
        counterexamples,
    })
}
