//! The trinomial family f(x) = a x + b x^q + x^(2q-1) over F_{q^2}:
//! evaluation, the brute-force permutation oracle, power sums, the
//! constrained quadruple-sum expansion, the two closed power-sum forms, and
//! the Hermite criterion at tiny scale.

use crate::combinat::gen_binom;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// One member of the family, tied to its field context.
#[derive(Clone, Copy)]
pub struct Trinomial<'c> {
    ctx: &'c FieldCtx,
    a: Elem,
    b: Elem,
}

/// The exponent alpha + (q-1-alpha) q probed by the expansion at a given alpha.
pub fn power_sum_exponent(q: u32, alpha: u32) -> u64 {
    assert!(alpha < q, "alpha must lie in [0, q-1]");
    alpha as u64 + (q - 1 - alpha) as u64 * q as u64
}

impl<'c> Trinomial<'c> {
    pub fn new(ctx: &'c FieldCtx, a: Elem, b: Elem) -> Self {
        Trinomial { ctx, a, b }
    }

    pub fn a(&self) -> Elem {
        self.a
    }

    pub fn b(&self) -> Elem {
        self.b
    }

    pub fn ctx(&self) -> &'c FieldCtx {
        self.ctx
    }

    /// a x + b x^q + x^(2q-1), with the last term 0 at x = 0.
    pub fn eval(&self, x: Elem) -> Elem {
        let c = self.ctx;
        let head = c.add(c.mul(self.a, x), c.mul(self.b, c.frobenius(x)));
        let tail = c.pow_u(x, (2 * c.q() - 1) as u64);
        c.add(head, tail)
    }

    /// True iff f hits every value of F_{q^2} exactly once.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.ctx.q2() as usize];
        for x in self.ctx.elems() {
            let y = self.eval(x).encoding() as usize;
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    /// The direct power sum over all of F_{q^2}, with 0^0 = 1 at s = 0.
    pub fn power_sum(&self, s: u64) -> Elem {
        let c = self.ctx;
        let mut acc = Elem::ZERO;
        for x in c.elems() {
            acc = c.add(acc, c.pow_u(self.eval(x), s));
        }
        acc
    }

    /// The power sum at s = alpha + (q-1-alpha) q, computed through the
    /// constrained quadruple sum over binomial products rather than by
    /// evaluation.
    ///
    /// For each index triple (i, k, j) the inner index l is pinned by
    /// i + k - j - l - alpha - 1 being 0 or -(q+1), so only two candidates
    /// are ever inspected. Zero bases follow the 0^0 = 1 convention, which
    /// is what makes the degenerate a = 0 and b = 0 members come out right.
    pub fn power_sum_expansion(&self, alpha: u32) -> Result<Elem> {
        let c = self.ctx;
        let q = c.q();
        if alpha >= q {
            return Err(Error::Precondition(format!(
                "alpha = {alpha} must lie in [0, {}]",
                q - 1
            )));
        }
        let beta = q - 1 - alpha;
        let p = c.p();
        let mut acc = Elem::ZERO;
        for i in 0..=alpha {
            let ci = gen_binom(alpha as i64, i, p);
            if ci == 0 {
                continue;
            }
            for k in 0..=i {
                let cik = ci as u64 * gen_binom(i as i64, k, p) as u64 % p as u64;
                if cik == 0 {
                    continue;
                }
                for j in 0..=beta {
                    let cj = cik * gen_binom(beta as i64, j, p) as u64 % p as u64;
                    if cj == 0 {
                        continue;
                    }
                    let pinned = i as i64 + k as i64 - j as i64 - alpha as i64 - 1;
                    for l in [pinned, pinned + (q as i64 + 1)] {
                        if l < 0 || l > j as i64 {
                            continue;
                        }
                        let coeff = cj * gen_binom(j as i64, l as u32, p) as u64 % p as u64;
                        if coeff == 0 {
                            continue;
                        }
                        let a_exp = (alpha - i) as u64 + (beta - j) as u64 * q as u64;
                        let b_exp = (i - k) as u64 + (j as u64 - l as u64) * q as u64;
                        let term = c.mul(
                            c.embed_int(coeff as i64),
                            c.mul(c.pow_u(self.a, a_exp), c.pow_u(self.b, b_exp)),
                        );
                        acc = c.add(acc, term);
                    }
                }
            }
        }
        Ok(c.neg(acc))
    }

    fn closed_form_preconditions(&self) -> Result<()> {
        let c = self.ctx;
        if self.a.is_zero() || self.b.is_zero() {
            return Err(Error::Precondition(
                "closed forms require a != 0 and b != 0".into(),
            ));
        }
        let e = c.div(self.a, c.mul(self.b, self.b)).expect("b is nonzero");
        if !c.is_in_subfield(e) {
            return Err(Error::Precondition(
                "closed forms require a/b^2 to lie in F_q".into(),
            ));
        }
        let splits = if c.p() != 2 {
            let d = c.sub(Elem::ONE, c.mul(c.embed_int(4), e));
            !d.is_zero() && c.is_square_fq_unchecked(d)
        } else {
            c.abs_trace_unchecked(e) == 0
        };
        if !splits {
            return Err(Error::Precondition(
                "closed forms require x^2 + x + a/b^2 to have two distinct roots in F_q".into(),
            ));
        }
        Ok(())
    }

    /// The closed form for the power sum at s = alpha + (q-1-alpha) q,
    /// alpha in {1, 2}; alpha = 2 additionally requires q > 2.
    pub fn closed_power_sum(&self, alpha: u32) -> Result<Elem> {
        let c = self.ctx;
        let q = c.q() as i64;
        self.closed_form_preconditions()?;
        let (a, b) = (self.a, self.b);
        let b2 = c.mul(b, b);
        let a2 = c.mul(a, a);
        let bq1 = c.pow(b, q - 1)?;
        let first = c.sub(c.pow(b, 1 - q)?, a);
        let second = c.sub(c.sub(b2, c.mul(a2, bq1)), c.mul(c.embed_int(3), a));
        let sep = c.sub(b2, c.mul(c.embed_int(4), a));
        match alpha {
            1 => {
                let num = c.mul(
                    c.pow(b, 4 - 4 * q)?,
                    c.mul(c.embed_int(2), c.mul(first, second)),
                );
                let den = c.mul(a2, sep);
                c.div(num, den)
            }
            2 => {
                if q <= 2 {
                    return Err(Error::Precondition(
                        "the second closed form requires q > 2".into(),
                    ));
                }
                let third = {
                    let t1 = c.mul(c.embed_int(9), a);
                    let t2 = c.neg(c.mul(c.embed_int(2), b2));
                    let t3 = c.mul(c.mul(a2, a), c.pow(b, 2 * q - 2)?);
                    let t4 = c.neg(c.mul(c.embed_int(6), c.mul(a2, bq1)));
                    let t5 = c.mul(a, c.pow(b, q + 1)?);
                    c.add(c.add(c.add(t1, t2), c.add(t3, t4)), t5)
                };
                let num = c.mul(
                    c.pow(b, 8 - 7 * q)?,
                    c.mul(c.embed_int(3), c.mul(first, c.mul(second, third))),
                );
                let den = c.mul(c.mul(a2, a2), c.mul(sep, sep));
                c.div(num, den)
            }
            _ => Err(Error::Precondition(format!(
                "no closed form for alpha = {alpha}; only 1 and 2 are available"
            ))),
        }
    }

    /// Hermite's criterion: exactly one root and vanishing power sums for
    /// every s in [1, q^2 - 2]. Limited to q^2 <= 64.
    pub fn hermite_test(&self) -> Result<bool> {
        let c = self.ctx;
        if c.q2() > 64 {
            return Err(Error::FieldTooLarge { q: c.q(), max: 8 });
        }
        let roots = c.elems().filter(|&x| self.eval(x).is_zero()).count();
        if roots != 1 {
            return Ok(false);
        }
        for s in 1..=(c.q2() as u64 - 2) {
            if !self.power_sum(s).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32) -> FieldCtx {
        FieldCtx::from_q(q).unwrap()
    }

    #[test]
    fn eval_examples() {
        let c4 = ctx(4);
        let f = Trinomial::new(&c4, Elem::ONE, Elem::ONE);
        assert_eq!(f.eval(Elem::ZERO), Elem::ZERO);
        assert_eq!(f.eval(Elem::ONE), Elem::ONE);

        let c3 = ctx(3);
        let f = Trinomial::new(&c3, Elem::ZERO, Elem::ZERO);
        let g = c3.generator();
        assert_eq!(f.eval(g), c3.pow(g, 5).unwrap());
        assert_eq!(f.eval(Elem::ZERO), Elem::ZERO);
    }

    #[test]
    fn permutation_oracle_examples() {
        let c3 = ctx(3);
        assert!(Trinomial::new(&c3, Elem::ZERO, Elem::ZERO).is_permutation());
        let c5 = ctx(5);
        assert!(!Trinomial::new(&c5, Elem::ZERO, Elem::ZERO).is_permutation());
        let c4 = ctx(4);
        assert!(Trinomial::new(&c4, Elem::ONE, Elem::ONE).is_permutation());
    }

    #[test]
    fn power_sum_examples() {
        let c3 = ctx(3);
        let f = Trinomial::new(&c3, Elem::ZERO, Elem::ZERO);
        assert_eq!(f.power_sum(1), Elem::ZERO);
        assert_eq!(f.power_sum(8), c3.embed_int(-1));
        assert_eq!(f.power_sum(0), Elem::ZERO);

        let c5 = ctx(5);
        let f = Trinomial::new(&c5, c5.elem(3).unwrap(), Elem::ONE);
        assert_eq!(f.power_sum(16), c5.elem(3).unwrap());
    }

    #[test]
    fn homogeneity_over_subfield_scalars() {
        for q in [3u32, 4, 8] {
            let c = ctx(q);
            let pairs: Vec<(Elem, Elem)> = if q <= 4 {
                c.elems()
                    .flat_map(|a| c.elems().map(move |b| (a, b)))
                    .collect()
            } else {
                let g = c.generator();
                vec![
                    (Elem::ZERO, Elem::ONE),
                    (g, c.mul(g, g)),
                    (c.pow(g, 7).unwrap(), c.pow(g, 13).unwrap()),
                ]
            };
            for (a, b) in pairs {
                let f = Trinomial::new(&c, a, b);
                for t in c.subfield_elems() {
                    for x in c.elems() {
                        assert_eq!(f.eval(c.mul(t, x)), c.mul(t, f.eval(x)), "q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_matches_direct_sums_exhaustively() {
        for q in [2u32, 3, 4, 5] {
            let c = ctx(q);
            for a in c.elems() {
                for b in c.elems() {
                    let f = Trinomial::new(&c, a, b);
                    for alpha in 0..q {
                        let s = power_sum_exponent(q, alpha);
                        assert_eq!(
                            f.power_sum_expansion(alpha).unwrap(),
                            f.power_sum(s),
                            "q={q} a={} b={} alpha={alpha}",
                            a.encoding(),
                            b.encoding()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_degenerate_a_zero() {
        for q in [3u32, 4, 5, 7] {
            let c = ctx(q);
            let g = c.generator();
            for b in [Elem::ONE, g, c.mul(g, g)] {
                let f = Trinomial::new(&c, Elem::ZERO, b);
                let got = f.power_sum_expansion(q - 1).unwrap();
                assert_eq!(got, c.pow(b, q as i64 - 2).unwrap(), "q={q}");
            }
        }
    }

    #[test]
    fn expansion_rejects_large_alpha() {
        let c = ctx(5);
        let f = Trinomial::new(&c, Elem::ONE, Elem::ONE);
        assert!(matches!(
            f.power_sum_expansion(5),
            Err(Error::Precondition(_))
        ));
    }

    fn admissible_pairs(c: &FieldCtx) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in c.elems().skip(1) {
            for b in c.elems().skip(1) {
                let f = Trinomial::new(c, a, b);
                if f.closed_form_preconditions().is_ok() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn closed_forms_match_direct_sums() {
        for q in [4u32, 5, 7] {
            let c = ctx(q);
            let pairs = admissible_pairs(&c);
            assert!(!pairs.is_empty(), "q={q}");
            for (a, b) in pairs {
                let f = Trinomial::new(&c, a, b);
                let s1 = 1 + (q as u64 - 2) * q as u64;
                assert_eq!(
                    f.closed_power_sum(1).unwrap(),
                    f.power_sum(s1),
                    "q={q} alpha=1"
                );
                if q > 2 {
                    let s2 = 2 + (q as u64 - 3) * q as u64;
                    assert_eq!(
                        f.closed_power_sum(2).unwrap(),
                        f.power_sum(s2),
                        "q={q} alpha=2"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_spec_instance() {
        let c = ctx(5);
        let f = Trinomial::new(&c, c.elem(3).unwrap(), Elem::ONE);
        assert_eq!(f.closed_power_sum(1).unwrap(), c.elem(3).unwrap());
        assert_eq!(f.power_sum(16), c.elem(3).unwrap());
    }

    #[test]
    fn closed_form_zero_factors() {
        for q in [5u32, 7, 9] {
            let c = ctx(q);
            for (a, b) in admissible_pairs(&c) {
                let f = Trinomial::new(&c, a, b);
                let first_zero = c.pow(b, 1 - q as i64).unwrap() == a;
                let second_zero = {
                    let b2 = c.mul(b, b);
                    let t = c.mul(c.mul(a, a), c.pow(b, q as i64 - 1).unwrap());
                    c.sub(c.sub(b2, t), c.mul(c.embed_int(3), a)).is_zero()
                };
                if first_zero || second_zero {
                    assert_eq!(f.closed_power_sum(1).unwrap(), Elem::ZERO, "q={q}");
                    assert_eq!(f.closed_power_sum(2).unwrap(), Elem::ZERO, "q={q}");
                }
            }
        }
    }

    #[test]
    fn closed_form_rejections() {
        let c = ctx(5);
        let f = Trinomial::new(&c, Elem::ZERO, Elem::ONE);
        assert!(matches!(f.closed_power_sum(1), Err(Error::Precondition(_))));
        let g = c.generator();
        let f = Trinomial::new(&c, g, Elem::ONE);
        assert!(matches!(f.closed_power_sum(1), Err(Error::Precondition(_))));
        let c2 = ctx(2);
        for a in c2.elems().skip(1) {
            for b in c2.elems().skip(1) {
                let f = Trinomial::new(&c2, a, b);
                assert!(f.closed_power_sum(1).is_err());
            }
        }
    }

    #[test]
    fn hermite_matches_permutation_oracle() {
        for q in [2u32, 3, 4] {
            let c = ctx(q);
            for a in c.elems() {
                for b in c.elems() {
                    let f = Trinomial::new(&c, a, b);
                    assert_eq!(
                        f.hermite_test().unwrap(),
                        f.is_permutation(),
                        "q={q} a={} b={}",
                        a.encoding(),
                        b.encoding()
                    );
                }
            }
        }
    }

    #[test]
    fn hermite_examples_and_limit() {
        let c3 = ctx(3);
        assert!(Trinomial::new(&c3, Elem::ZERO, Elem::ZERO)
            .hermite_test()
            .unwrap());
        let c2 = ctx(2);
        assert!(!Trinomial::new(&c2, Elem::ONE, Elem::ONE)
            .hermite_test()
            .unwrap());
        let c4 = ctx(4);
        assert!(Trinomial::new(&c4, Elem::ONE, Elem::ONE)
            .hermite_test()
            .unwrap());
        let c9 = ctx(9);
        let f = Trinomial::new(&c9, Elem::ONE, Elem::ONE);
        assert!(matches!(f.hermite_test(), Err(Error::FieldTooLarge { .. })));
    }
}
