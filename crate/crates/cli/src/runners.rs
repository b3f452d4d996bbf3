//! One function per subcommand. Each returns the JSON report body plus a
//! flag telling the driver whether every check passed, and leaves all
//! formatting and exit-code policy to main.

use pptri_core::{
    check_disc_identities, check_identity, classify as classify_pair, coords_from_instance,
    count_roots_fq, disc_cubic, exhaustive_verify, power_sum_exponent, sampled_verify,
    uniqueness_property, CaseTag, CubicParams, Elem, Error, FieldCtx, Identity, Report, Trinomial,
    Uniqueness,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::CliError;

fn report(ctx: &FieldCtx, kind: &str, extra: Value) -> Value {
    let mut value = json!({
        "schema": 1,
        "kind": kind,
        "q": ctx.q(),
        "p": ctx.p(),
        "n": ctx.n(),
        "modulus": ctx.modulus(),
    });
    let (Value::Object(base), Value::Object(extra)) = (&mut value, extra) else {
        unreachable!("both literals are objects");
    };
    base.extend(extra);
    value
}

pub fn verify(ctx: &FieldCtx, samples: Option<u64>) -> Result<Report, CliError> {
    match samples {
        None => Ok(exhaustive_verify(ctx)?),
        Some(n) => Ok(sampled_verify(ctx, n)),
    }
}

pub fn verify_csv(report: &Report) -> String {
    let mut out = String::from("a_enc,b_enc,case_tag\n");
    for (a, b, tag) in &report.pp_pairs {
        out.push_str(&format!("{a},{b},{tag}\n"));
    }
    out
}

pub fn classify(ctx: &FieldCtx, a_enc: u32, b_enc: u32) -> Result<Value, CliError> {
    let a = ctx.elem(a_enc)?;
    let b = ctx.elem(b_enc)?;
    let verdict = classify_pair(ctx, a, b);
    Ok(report(
        ctx,
        "classify",
        json!({
            "a": a_enc,
            "b": b_enc,
            "is_pp": verdict.is_pp(),
            "case": verdict.case_label(),
        }),
    ))
}

pub fn identities(ctx: &FieldCtx) -> Result<(Value, bool), CliError> {
    let mut rows = Vec::new();
    let mut all_hold = true;
    for id in Identity::ALL {
        let mut admissible = 0u64;
        let mut failures = Vec::new();
        for z in ctx.subfield_elems() {
            if !id.admissible(ctx, z) {
                continue;
            }
            admissible += 1;
            let check = check_identity(ctx, id, z)?;
            if !check.holds {
                all_hold = false;
                failures.push(json!({
                    "z": z.encoding(),
                    "lhs": check.lhs.encoding(),
                    "rhs": check.rhs.encoding(),
                }));
            }
        }
        rows.push(json!({
            "identity": id.name(),
            "admissible_count": admissible,
            "holds": failures.is_empty(),
            "failures": failures,
        }));
    }
    let value = report(
        ctx,
        "identities",
        json!({ "identities": rows, "all_hold": all_hold }),
    );
    Ok((value, all_hold))
}

pub fn powersums(ctx: &FieldCtx, samples: u64) -> Result<(Value, bool), CliError> {
    let q = ctx.q();
    let q2 = ctx.q2();

    let mut expansion_checked = 0u64;
    let mut expansion_failures = Vec::new();
    let mut check_expansion = |a_enc: u32, b_enc: u32, alpha: u32| -> Result<(), CliError> {
        let f = Trinomial::new(ctx, ctx.elem(a_enc)?, ctx.elem(b_enc)?);
        let expanded = f.power_sum_expansion(alpha)?;
        let direct = f.power_sum(power_sum_exponent(q, alpha));
        expansion_checked += 1;
        if expanded != direct {
            expansion_failures.push(json!({
                "a": a_enc,
                "b": b_enc,
                "alpha": alpha,
                "expansion": expanded.encoding(),
                "direct": direct.encoding(),
            }));
        }
        Ok(())
    };

    let expansion_mode;
    if q <= 5 {
        expansion_mode = "exhaustive";
        for a_enc in 1..q2 {
            for b_enc in 1..q2 {
                for alpha in 0..q {
                    check_expansion(a_enc, b_enc, alpha)?;
                }
            }
        }
    } else {
        expansion_mode = "sampled";
        let mut rng = ChaCha8Rng::seed_from_u64(((q as u64) << 40) ^ samples);
        for _ in 0..samples {
            let a_enc = 1 + rng.next_u32() % (q2 - 1);
            let b_enc = 1 + rng.next_u32() % (q2 - 1);
            let alpha = rng.next_u32() % q;
            check_expansion(a_enc, b_enc, alpha)?;
        }
    }

    let mut admissible_pairs = 0u64;
    let mut closed_failures = Vec::new();
    for a_enc in 1..q2 {
        for b_enc in 1..q2 {
            let f = Trinomial::new(ctx, ctx.elem(a_enc)?, ctx.elem(b_enc)?);
            let closed_first = match f.closed_power_sum(1) {
                Ok(v) => v,
                Err(Error::Precondition(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            admissible_pairs += 1;
            let mut compare = |alpha: u32, closed: Elem| {
                let direct = f.power_sum(power_sum_exponent(q, alpha));
                if closed != direct {
                    closed_failures.push(json!({
                        "a": a_enc,
                        "b": b_enc,
                        "alpha": alpha,
                        "closed": closed.encoding(),
                        "direct": direct.encoding(),
                    }));
                }
            };
            compare(1, closed_first);
            if q > 2 {
                compare(2, f.closed_power_sum(2)?);
            }
        }
    }

    let all_hold = expansion_failures.is_empty() && closed_failures.is_empty();
    let value = report(
        ctx,
        "powersums",
        json!({
            "expansion": {
                "mode": expansion_mode,
                "checked": expansion_checked,
                "failures": expansion_failures,
            },
            "closed_forms": {
                "admissible_pairs": admissible_pairs,
                "failures": closed_failures,
            },
            "all_hold": all_hold,
        }),
    );
    Ok((value, all_hold))
}

pub fn hermite(ctx: &FieldCtx) -> Result<(Value, bool), CliError> {
    if ctx.q2() > 64 {
        return Err(Error::FieldTooLarge { q: ctx.q(), max: 8 }.into());
    }
    let mut total = 0u64;
    let mut disagreements = Vec::new();
    for a_enc in 0..ctx.q2() {
        for b_enc in 0..ctx.q2() {
            let f = Trinomial::new(ctx, ctx.elem(a_enc)?, ctx.elem(b_enc)?);
            let hermite = f.hermite_test()?;
            let brute_force = f.is_permutation();
            total += 1;
            if hermite != brute_force {
                disagreements.push(json!({
                    "a": a_enc,
                    "b": b_enc,
                    "hermite": hermite,
                    "brute_force": brute_force,
                }));
            }
        }
    }
    let all_agree = disagreements.is_empty();
    let value = report(
        ctx,
        "hermite",
        json!({
            "total_pairs": total,
            "disagreements": disagreements,
            "all_agree": all_agree,
        }),
    );
    Ok((value, all_agree))
}

fn disc_identity_sweep(ctx: &FieldCtx) -> (Value, bool) {
    if ctx.p() == 2 {
        let value = json!({
            "applicable": false,
            "reason": "the discriminant identities are stated for odd q",
        });
        return (value, true);
    }
    let subfield: Vec<Elem> = ctx.subfield_elems().collect();
    let rows: Vec<(u64, u64, Vec<Value>)> = subfield
        .par_iter()
        .map(|&d| {
            let mut checked = 0u64;
            let mut skipped_lead = 0u64;
            let mut failures = Vec::new();
            for &e in &subfield {
                if e.is_zero() {
                    continue;
                }
                let e_inv = ctx.inv(e).expect("e is nonzero");
                let c = ctx.sub(ctx.mul(ctx.embed_int(3), e_inv), ctx.mul(e_inv, e_inv));
                for &u in &subfield {
                    for &v in &subfield {
                        let params = CubicParams { c, d, e, u, v };
                        if params.epsilon(ctx).is_zero() {
                            skipped_lead += 1;
                            continue;
                        }
                        let res = check_disc_identities(ctx, &params)
                            .expect("the sweep meets every precondition");
                        checked += 1;
                        if !(res.factorization_holds && res.derivative_holds) {
                            failures.push(json!({
                                "d": d.encoding(),
                                "e": e.encoding(),
                                "u": u.encoding(),
                                "v": v.encoding(),
                                "factorization_holds": res.factorization_holds,
                                "derivative_holds": res.derivative_holds,
                            }));
                        }
                    }
                }
            }
            (checked, skipped_lead, failures)
        })
        .collect();

    let mut checked = 0u64;
    let mut skipped_lead = 0u64;
    let mut failures = Vec::new();
    for (c, s, mut f) in rows {
        checked += c;
        skipped_lead += s;
        failures.append(&mut f);
    }
    let all_hold = failures.is_empty();
    let value = json!({
        "applicable": true,
        "tuples_checked": checked,
        "skipped_degenerate_lead": skipped_lead,
        "failures": failures,
        "all_hold": all_hold,
    });
    (value, all_hold)
}

fn cubic_case_instances(ctx: &FieldCtx) -> Vec<(Elem, Elem)> {
    let mut instances = Vec::new();
    for a in ctx.elems() {
        for b in ctx.elems() {
            let tag = classify_pair(ctx, a, b).case_tag();
            if tag == Some(CaseTag::AIV) || tag == Some(CaseTag::BIII) {
                instances.push((a, b));
            }
        }
    }
    instances
}

fn uniqueness_sweep(ctx: &FieldCtx) -> (Value, bool) {
    let instances = cubic_case_instances(ctx);
    let total = instances.len();
    let mut skipped_subfield_b = Vec::new();
    let mut usable = Vec::new();
    for (a, b) in instances {
        if ctx.is_in_subfield(b) {
            skipped_subfield_b.push([a.encoding(), b.encoding()]);
        } else {
            usable.push((a, b));
        }
    }
    let results: Vec<Uniqueness> = usable
        .par_iter()
        .map(|&(a, b)| {
            uniqueness_property(ctx, a, b)
                .expect("a classified instance with b outside F_q meets every precondition")
        })
        .collect();
    let mut violations = Vec::new();
    for (&(a, b), uni) in usable.iter().zip(&results) {
        if !uni.ok {
            violations.push(json!({
                "a": a.encoding(),
                "b": b.encoding(),
                "counterexamples": uni.counterexamples,
            }));
        }
    }
    let all_ok = violations.is_empty();
    let value = json!({
        "instances": total,
        "checked": usable.len(),
        "skipped_subfield_b": skipped_subfield_b,
        "violations": violations,
        "all_ok": all_ok,
    });
    (value, all_ok)
}

pub fn cubic_full(ctx: &FieldCtx) -> Result<(Value, bool), CliError> {
    let (sweep, sweep_ok) = disc_identity_sweep(ctx);
    let (uniqueness, uniqueness_ok) = uniqueness_sweep(ctx);
    let ok = sweep_ok && uniqueness_ok;
    let value = report(
        ctx,
        "cubic",
        json!({
            "identity_sweep": sweep,
            "uniqueness": uniqueness,
            "all_hold": ok,
        }),
    );
    Ok((value, ok))
}

pub fn cubic_instance(ctx: &FieldCtx, a_enc: u32, b_enc: u32) -> Result<(Value, bool), CliError> {
    let a = ctx.elem(a_enc)?;
    let b = ctx.elem(b_enc)?;
    let uni = uniqueness_property(ctx, a, b)?;
    let ok = uni.ok;
    let value = report(
        ctx,
        "cubic-instance",
        json!({
            "a": a_enc,
            "b": b_enc,
            "case": classify_pair(ctx, a, b).case_label(),
            "uniqueness": serde_json::to_value(&uni)?,
        }),
    );
    Ok((value, ok))
}

pub fn cubic_target(
    ctx: &FieldCtx,
    a_enc: u32,
    b_enc: u32,
    w_enc: u32,
) -> Result<(Value, bool), CliError> {
    let a = ctx.elem(a_enc)?;
    let b = ctx.elem(b_enc)?;
    let w = ctx.elem(w_enc)?;
    let params = coords_from_instance(ctx, a, b, w)?;
    let eps = params.epsilon(ctx);

    let mut body = json!({
        "a": a_enc,
        "b": b_enc,
        "w": w_enc,
        "case": classify_pair(ctx, a, b).case_label(),
        "params": {
            "c": params.c.encoding(),
            "d": params.d.encoding(),
            "e": params.e.encoding(),
            "u": params.u.encoding(),
            "v": params.v.encoding(),
        },
        "epsilon": eps.encoding(),
        "lead_vanishes": eps.is_zero(),
    });
    let fields = body.as_object_mut().expect("the literal is an object");

    let mut ok = true;
    if !eps.is_zero() {
        let g = pptri_core::build_g(ctx, &params).expect("leading coefficient is nonzero");
        let disc = disc_cubic(ctx, &g).expect("leading coefficient is nonzero");
        fields.insert(
            "cubic".into(),
            json!({
                "g3": g.g3.encoding(),
                "g2": g.g2.encoding(),
                "g1": g.g1.encoding(),
                "g0": g.g0.encoding(),
            }),
        );
        fields.insert("disc".into(), json!(disc.encoding()));
        fields.insert("roots_in_subfield".into(), json!(count_roots_fq(ctx, &g)));
        match check_disc_identities(ctx, &params) {
            Ok(res) => {
                ok = res.factorization_holds && res.derivative_holds;
                fields.insert("identities".into(), serde_json::to_value(res)?);
            }
            Err(Error::Precondition(_)) => {
                fields.insert("identities".into(), Value::Null);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((report(ctx, "cubic-target", body), ok))
}
