//! The classification predicates for the trinomial family, split by the
//! parity of q, and the verifier that compares them against the brute-force
//! permutation oracle over the full (a, b) square.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::trinomial::Trinomial;

/// Which branch of the classification a permutation pair satisfies.
///
/// The labels "A.i".."A.iv" (odd q) and "B.i".."B.iii" (even q) are the
/// serialized case taxonomy and are kept stable for external consumers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseTag {
    AI,
    AII,
    AIII,
    AIV,
    BI,
    BII,
    BIII,
}

impl CaseTag {
    pub const ODD: [CaseTag; 4] = [CaseTag::AI, CaseTag::AII, CaseTag::AIII, CaseTag::AIV];
    pub const EVEN: [CaseTag; 3] = [CaseTag::BI, CaseTag::BII, CaseTag::BIII];

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::AI => "A.i",
            CaseTag::AII => "A.ii",
            CaseTag::AIII => "A.iii",
            CaseTag::AIV => "A.iv",
            CaseTag::BI => "B.i",
            CaseTag::BII => "B.ii",
            CaseTag::BIII => "B.iii",
        }
    }
}

/// Outcome of the predicate on one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotPp,
    Pp(CaseTag),
}

impl Verdict {
    pub fn is_pp(self) -> bool {
        matches!(self, Verdict::Pp(_))
    }

    pub fn case_tag(self) -> Option<CaseTag> {
        match self {
            Verdict::NotPp => None,
            Verdict::Pp(t) => Some(t),
        }
    }

    pub fn case_label(self) -> &'static str {
        match self {
            Verdict::NotPp => "none",
            Verdict::Pp(t) => t.label(),
        }
    }
}

/// The odd-q predicate. The pair is a permutation pair iff one of four
/// mutually exclusive conditions holds, keyed by the zero-pattern of a, b,
/// and a - b^{1-q}.
pub fn classify_odd(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<Verdict> {
    if ctx.p() == 2 {
        return Err(Error::Precondition(
            "the odd-characteristic predicate requires odd q".into(),
        ));
    }
    let q = ctx.q();
    if b.is_zero() {
        if a.is_zero() {
            let r = q % 6;
            return Ok(if r == 1 || r == 3 {
                Verdict::Pp(CaseTag::AI)
            } else {
                Verdict::NotPp
            });
        }
        let t = ctx.pow(ctx.neg(a), q.div_ceil(2) as i64)?;
        let hit = t == ctx.embed_int(-1) || t == ctx.embed_int(3);
        return Ok(if hit {
            Verdict::Pp(CaseTag::AII)
        } else {
            Verdict::NotPp
        });
    }
    if a.is_zero() {
        return Ok(Verdict::NotPp);
    }
    let e = ctx.div(a, ctx.mul(b, b)).expect("b is nonzero");
    let four = ctx.embed_int(4);
    if a == ctx.pow(b, 1 - q as i64)? {
        let disc = ctx.sub(Elem::ONE, ctx.mul(four, e));
        let good = !disc.is_zero() && ctx.is_square_fq_unchecked(disc);
        return Ok(if good {
            Verdict::Pp(CaseTag::AIII)
        } else {
            Verdict::NotPp
        });
    }
    if !ctx.is_in_subfield(e) {
        return Ok(Verdict::NotPp);
    }
    let disc = ctx.sub(Elem::ONE, ctx.mul(four, e));
    if disc.is_zero() || !ctx.is_square_fq_unchecked(disc) {
        return Ok(Verdict::NotPp);
    }
    let second = {
        let b2 = ctx.mul(b, b);
        let t = ctx.mul(ctx.mul(a, a), ctx.pow(b, q as i64 - 1)?);
        ctx.sub(ctx.sub(b2, t), ctx.mul(ctx.embed_int(3), a))
    };
    Ok(if second.is_zero() {
        Verdict::Pp(CaseTag::AIV)
    } else {
        Verdict::NotPp
    })
}

/// The even-q predicate, with the absolute trace conditions in place of the
/// square conditions.
pub fn classify_even(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<Verdict> {
    if ctx.p() != 2 {
        return Err(Error::Precondition(
            "the even-characteristic predicate requires even q".into(),
        ));
    }
    let q = ctx.q();
    if b.is_zero() {
        if a.is_zero() {
            return Ok(if ctx.n().is_multiple_of(2) {
                Verdict::Pp(CaseTag::BI)
            } else {
                Verdict::NotPp
            });
        }
        return Ok(Verdict::NotPp);
    }
    if a.is_zero() {
        return Ok(Verdict::NotPp);
    }
    let e = ctx.div(a, ctx.mul(b, b)).expect("b is nonzero");
    if a == ctx.pow(b, 1 - q as i64)? {
        let good = ctx.abs_trace_unchecked(e) == 0;
        return Ok(if good {
            Verdict::Pp(CaseTag::BII)
        } else {
            Verdict::NotPp
        });
    }
    if !ctx.is_in_subfield(e) {
        return Ok(Verdict::NotPp);
    }
    if ctx.abs_trace_unchecked(e) != 0 {
        return Ok(Verdict::NotPp);
    }
    let second = {
        let b2 = ctx.mul(b, b);
        let t = ctx.mul(ctx.mul(a, a), ctx.pow(b, q as i64 - 1)?);
        ctx.add(ctx.add(b2, t), a)
    };
    Ok(if second.is_zero() {
        Verdict::Pp(CaseTag::BIII)
    } else {
        Verdict::NotPp
    })
}

/// Dispatches to the predicate matching the field's parity.
pub fn classify(ctx: &FieldCtx, a: Elem, b: Elem) -> Verdict {
    if ctx.p() == 2 {
        classify_even(ctx, a, b).expect("parity checked")
    } else {
        classify_odd(ctx, a, b).expect("parity checked")
    }
}

/// The fourth odd case re-evaluated without requiring a/b^2 to lie in F_q:
/// the square condition is read as (1-4a/b^2)^((q-1)/2) = 1 inside F_{q^2}.
/// Used to record whether the membership requirement is implied by the rest.
fn fourth_case_alternate_reading(ctx: &FieldCtx, a: Elem, b: Elem) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let q = ctx.q();
    let b1q = ctx.pow(b, 1 - q as i64).expect("b is nonzero");
    if a == b1q {
        return false;
    }
    let e = ctx.div(a, ctx.mul(b, b)).expect("b is nonzero");
    let disc = ctx.sub(Elem::ONE, ctx.mul(ctx.embed_int(4), e));
    if disc.is_zero() || ctx.pow_u(disc, ((q - 1) / 2) as u64) != Elem::ONE {
        return false;
    }
    let second = {
        let b2 = ctx.mul(b, b);
        let t = ctx.mul(ctx.mul(a, a), ctx.pow(b, q as i64 - 1).unwrap());
        ctx.sub(ctx.sub(b2, t), ctx.mul(ctx.embed_int(3), a))
    };
    second.is_zero()
}

/// Predicate verdict attached to a mismatch record.
#[derive(Debug, Clone, Serialize)]
pub struct PredicateVerdict {
    pub is_pp: bool,
    pub case: String,
}

/// Brute-force verdict attached to a mismatch record.
#[derive(Debug, Clone, Serialize)]
pub struct OracleVerdict {
    pub is_pp: bool,
}

/// One disagreement between predicate and oracle.
#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub a: u32,
    pub b: u32,
    pub predicate: PredicateVerdict,
    pub oracle: OracleVerdict,
}

/// Result of a verification run, serializable as the report envelope.
///
/// elapsed_ms is kept at zero so reports are byte-identical across runs and
/// worker counts; the field stays in the schema for readers that expect it.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub q: u32,
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub mode: String,
    pub total_pairs: u64,
    pub pp_count: u64,
    pub pp_cases: BTreeMap<String, u64>,
    pub mismatches: Vec<Mismatch>,
    pub membership_reading_diffs: Vec<[u32; 2]>,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub pp_pairs: Vec<(u32, u32, &'static str)>,
}

struct PairOutcome {
    verdict: Verdict,
    oracle_pp: bool,
    reading_diff: bool,
}

fn check_pair(ctx: &FieldCtx, a: Elem, b: Elem, record_readings: bool) -> PairOutcome {
    let verdict = classify(ctx, a, b);
    let oracle_pp = Trinomial::new(ctx, a, b).is_permutation();
    let reading_diff = record_readings
        && fourth_case_alternate_reading(ctx, a, b) != (verdict.case_tag() == Some(CaseTag::AIV));
    PairOutcome {
        verdict,
        oracle_pp,
        reading_diff,
    }
}

fn empty_histogram(ctx: &FieldCtx) -> BTreeMap<String, u64> {
    let tags: &[CaseTag] = if ctx.p() == 2 {
        &CaseTag::EVEN
    } else {
        &CaseTag::ODD
    };
    tags.iter().map(|t| (t.label().to_string(), 0)).collect()
}

fn base_report(ctx: &FieldCtx, mode: &str) -> Report {
    Report {
        schema: 1,
        q: ctx.q(),
        p: ctx.p(),
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        mode: mode.to_string(),
        total_pairs: 0,
        pp_count: 0,
        pp_cases: empty_histogram(ctx),
        mismatches: Vec::new(),
        membership_reading_diffs: Vec::new(),
        elapsed_ms: 0,
        pp_pairs: Vec::new(),
    }
}

struct RowOutcome {
    mismatches: Vec<Mismatch>,
    pp_pairs: Vec<(u32, u32, &'static str)>,
    reading_diffs: Vec<[u32; 2]>,
}

fn merge_outcomes(report: &mut Report, pairs: impl Iterator<Item = ((u32, u32), PairOutcome)>) {
    for ((a, b), out) in pairs {
        if let Some(tag) = out.verdict.case_tag() {
            *report
                .pp_cases
                .get_mut(tag.label())
                .expect("histogram is pre-seeded") += 1;
            report.pp_count += 1;
            report.pp_pairs.push((a, b, tag.label()));
        }
        if out.verdict.is_pp() != out.oracle_pp {
            report.mismatches.push(Mismatch {
                a,
                b,
                predicate: PredicateVerdict {
                    is_pp: out.verdict.is_pp(),
                    case: out.verdict.case_label().to_string(),
                },
                oracle: OracleVerdict {
                    is_pp: out.oracle_pp,
                },
            });
        }
        if out.reading_diff {
            report.membership_reading_diffs.push([a, b]);
        }
    }
}

/// Limit on q for the exhaustive q^4-scale verification sweep.
pub const EXHAUSTIVE_LIMIT: u32 = 32;

/// Compares predicate and oracle on every (a, b) pair. Rows are scanned in
/// parallel but merged in encoding order, so the report does not depend on
/// the worker count. Refuses q > 32; use sampled_verify there.
pub fn exhaustive_verify(ctx: &FieldCtx) -> Result<Report> {
    if ctx.q() > EXHAUSTIVE_LIMIT {
        return Err(Error::FieldTooLarge {
            q: ctx.q(),
            max: EXHAUSTIVE_LIMIT,
        });
    }
    let q2 = ctx.q2();
    let record_readings = ctx.p() != 2 && ctx.q() <= 13;

    let rows: Vec<RowOutcome> = (0..q2)
        .into_par_iter()
        .map(|a_enc| {
            let a = Elem(a_enc);
            let mut row = RowOutcome {
                mismatches: Vec::new(),
                pp_pairs: Vec::new(),
                reading_diffs: Vec::new(),
            };
            for b_enc in 0..q2 {
                let b = Elem(b_enc);
                let out = check_pair(ctx, a, b, record_readings);
                if let Some(tag) = out.verdict.case_tag() {
                    row.pp_pairs.push((a_enc, b_enc, tag.label()));
                }
                if out.verdict.is_pp() != out.oracle_pp {
                    row.mismatches.push(Mismatch {
                        a: a_enc,
                        b: b_enc,
                        predicate: PredicateVerdict {
                            is_pp: out.verdict.is_pp(),
                            case: out.verdict.case_label().to_string(),
                        },
                        oracle: OracleVerdict {
                            is_pp: out.oracle_pp,
                        },
                    });
                }
                if out.reading_diff {
                    row.reading_diffs.push([a_enc, b_enc]);
                }
            }
            row
        })
        .collect();

    let mut report = base_report(ctx, "exhaustive");
    report.total_pairs = q2 as u64 * q2 as u64;
    for row in rows {
        for (a, b, label) in row.pp_pairs {
            *report
                .pp_cases
                .get_mut(label)
                .expect("histogram is pre-seeded") += 1;
            report.pp_count += 1;
            report.pp_pairs.push((a, b, label));
        }
        report.mismatches.extend(row.mismatches);
        report.membership_reading_diffs.extend(row.reading_diffs);
    }
    Ok(report)
}

/// Compares predicate and oracle on a deterministic pseudorandom sample of
/// pairs. The stream is seeded from (q, samples) only, so a given
/// configuration always checks the same pairs.
pub fn sampled_verify(ctx: &FieldCtx, samples: u64) -> Report {
    let q2 = ctx.q2();
    let mut rng = ChaCha8Rng::seed_from_u64(((ctx.q() as u64) << 40) ^ samples);
    let pairs: Vec<(u32, u32)> = (0..samples)
        .map(|_| (rng.next_u32() % q2, rng.next_u32() % q2))
        .collect();
    let record_readings = ctx.p() != 2 && ctx.q() <= 13;

    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|&(a, b)| check_pair(ctx, Elem(a), Elem(b), record_readings))
        .collect();

    let mut report = base_report(ctx, "sampled");
    report.total_pairs = samples;
    merge_outcomes(&mut report, pairs.into_iter().zip(outcomes));
    report
}
