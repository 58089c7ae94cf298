//! The published closed-form order-2 approximation of the model and an
//! audit of its 23 printed constants (A1..A9, B1..B7, C1..C7) against the
//! recursion engine.
//!
//! The printed formulas are implemented verbatim, suspected typos included:
//! fidelity to the published text is this module's contract, and any
//! disagreement is the audit's finding rather than something to fix
//! silently. Each constant is paired with its printed exponent on the rate
//! lattice, so the engine-side coefficient of the identical exponent can be
//! extracted and compared.

use std::fmt;

use crate::algebra::{ExpPolySeries, RateVector};
use crate::engine::{zeroth_order, HpmExpansion};
use crate::model::{InitialState, ModelParams};
use crate::scalar::Real;

/// A printed constant: evaluated value plus its exponent tag and the
/// perturbation order it belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PaperConstant<T> {
    pub name: &'static str,
    pub rate: RateVector,
    pub order: usize,
    pub value: T,
}

/// The 23 printed constants, evaluated for one parameter set.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperCoefficients<T> {
    /// A1..A9 (susceptible series).
    pub a: Vec<PaperConstant<T>>,
    /// B1..B7 (infected series).
    pub b: Vec<PaperConstant<T>>,
    /// C1..C7 (predator series).
    pub c: Vec<PaperConstant<T>>,
    /// Second parenthesization reading of A8 (the printed grouping is
    /// ambiguous); the audit flags whichever reading sits closer to the
    /// engine value.
    pub a8_alternate: T,
}

impl<T: Real> PaperCoefficients<T> {
    pub fn all(&self) -> impl Iterator<Item = &PaperConstant<T>> {
        self.a.iter().chain(self.b.iter()).chain(self.c.iter())
    }

    /// Sum of the A constants: the t = 0 defect of the printed S series.
    pub fn sum_a(&self) -> T {
        self.a.iter().fold(T::zero(), |acc, c| acc + c.value)
    }

    pub fn sum_b(&self) -> T {
        self.b.iter().fold(T::zero(), |acc, c| acc + c.value)
    }

    pub fn sum_c(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, c| acc + c.value)
    }
}

/// Parameters make one or more printed denominators vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonantParameters {
    pub denominators: Vec<String>,
}

impl fmt::Display for ResonantParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "printed constants undefined: vanishing denominator(s) {}",
            self.denominators.join(", ")
        )
    }
}

impl std::error::Error for ResonantParameters {}

/// One printed constant before the defined/undefined split.
struct ConstantEval<T> {
    name: &'static str,
    rate: RateVector,
    order: usize,
    value: Option<T>,
    vanished: Vec<&'static str>,
}

fn eval_constant<T: Real>(
    name: &'static str,
    rate: RateVector,
    order: usize,
    denominators: &[(&'static str, T)],
    value: impl FnOnce() -> T,
) -> ConstantEval<T> {
    let vanished: Vec<&'static str> = denominators
        .iter()
        .filter(|(_, d)| *d == T::zero())
        .map(|(n, _)| *n)
        .collect();
    ConstantEval {
        name,
        rate,
        order,
        value: if vanished.is_empty() {
            Some(value())
        } else {
            None
        },
        vanished,
    }
}

/// All 23 printed formulas, each checked against its own denominators.
fn constant_table<T: Real>(params: &ModelParams<T>, ics: &InitialState<T>) -> Vec<ConstantEval<T>> {
    let ModelParams {
        r,
        k,
        c1,
        c2,
        delta,
        e,
        d1,
        d2,
    } = *params;
    let InitialState { s0, i0, p0 } = *ics;
    let one = T::one();
    let two = T::int(2);
    let rv = RateVector::new;

    vec![
        eval_constant("A1", rv(2, 0, 0), 1, &[("K", k)], || -(s0 * s0) / k),
        eval_constant("A2", rv(1, 1, 0), 1, &[("d1", d1), ("K", k)], || {
            (one / d1) * (r / k + delta) * s0 * i0
        }),
        eval_constant("A3", rv(1, 0, 1), 1, &[("d2", d2)], || (c1 / d2) * s0 * p0),
        eval_constant("A4", rv(3, 0, 0), 2, &[("K", k)], || s0 * s0 * s0 / (k * k)),
        eval_constant(
            "A5",
            rv(1, 1, 1),
            2,
            &[("d1+d2", d1 + d2), ("d1", d1), ("d2", d2), ("K", k)],
            || {
                (one / (d1 + d2))
                    * ((r / k + delta) * (two * c2 / d1 + c1 / d2) - e * c2 * c2 / d2)
                    * s0
                    * i0
                    * p0
            },
        ),
        eval_constant(
            "A6",
            rv(1, 2, 0),
            2,
            &[("K", k), ("d1", d1), ("d2", d2)],
            || {
                r * c1 / (two * k * d1 * d2) * i0 * s0 * p0
                    + delta / (two * d1 * d1) * (r / k + delta) * i0 * i0 * s0
            },
        ),
        eval_constant("A7", rv(1, 0, 2), 2, &[("d2", d2)], || {
            c1 * c1 / (d2 * d2) * s0 * p0 * p0
        }),
        eval_constant(
            "A8",
            rv(2, 1, 0),
            2,
            &[("r-d1", r - d1), ("r", r), ("K", k), ("d1", d1)],
            || {
                -(one / (r - d1))
                    * (delta / r + one / k)
                    * (two * r * r / (k * d1) - r / k + delta)
                    * s0
                    * s0
                    * i0
            },
        ),
        eval_constant(
            "A9",
            rv(2, 0, 1),
            2,
            &[("r-d2", r - d2), ("K", k), ("d2", d2), ("r", r)],
            || {
                -(one / (r - d2))
                    * (two * r * c1 / (k * d2) - e * c1 * c1 / r - c1 / k)
                    * s0
                    * s0
                    * p0
            },
        ),
        eval_constant("B1", rv(1, 1, 0), 1, &[("r", r)], || (delta / r) * s0 * i0),
        eval_constant("B2", rv(0, 1, 1), 1, &[("d1", d1)], || (c2 / d1) * i0 * p0),
        eval_constant(
            "B3",
            rv(1, 1, 1),
            2,
            &[("r-d2", r - d2), ("d2", d2), ("d1", d1), ("r", r)],
            || {
                (one / (r - d2))
                    * (delta * (c1 / d2 + c2 / d1) - c2 * ((e * c1 + delta) / r))
                    * s0
                    * i0
                    * p0
            },
        ),
        eval_constant(
            "B4",
            rv(1, 2, 0),
            2,
            &[("d2", d2), ("r-d1", r - d1)],
            || delta * c1 / (d2 * (r - d1)) * s0 * i0 * p0,
        ),
        eval_constant("B5", rv(2, 1, 0), 2, &[("r", r), ("K", k)], || {
            delta / (two * r) * (delta / r - one / k) * s0 * s0 * i0
        }),
        eval_constant(
            "B6",
            rv(0, 2, 1),
            2,
            &[("d2", d2), ("d1+d2", d1 + d2)],
            || -(e * c2 * c2 / (d2 * (d1 + d2))) * i0 * i0 * p0,
        ),
        eval_constant("B7", rv(0, 1, 2), 2, &[("d1", d1), ("d2", d2)], || {
            c2 * c2 / (two * d2 * d1) * p0 * p0 * i0
        }),
        eval_constant("C1", rv(1, 0, 1), 1, &[("r", r)], || (e * c1 / r) * s0 * p0),
        eval_constant("C2", rv(0, 1, 1), 1, &[("d2", d2)], || {
            -(e * c2 / d2) * i0 * p0
        }),
        eval_constant(
            "C3",
            rv(1, 1, 1),
            2,
            &[("r-d1", r - d1), ("r", r), ("d2", d2)],
            || {
                (one / (r - d1))
                    * ((e * e * c1 * c2 / r + e * c2 * delta / r - e * e * c1 * c2 / d2)
                        * s0
                        * i0
                        * p0
                        + e * c1 * c1 / d2 * s0 * p0 * p0)
            },
        ),
        eval_constant(
            "C4",
            rv(1, 0, 2),
            2,
            &[("d2", d2), ("r-d2", r - d2)],
            || e * c1 * c1 / (d2 * (r - d2)) * s0 * p0 * p0,
        ),
        eval_constant("C5", rv(2, 0, 1), 2, &[("r", r), ("K", k)], || {
            e * c1 / (two * r) * (e * c1 / r - one / k) * s0 * s0 * p0
        }),
        eval_constant(
            "C6",
            rv(0, 1, 2),
            2,
            &[("d1", d1), ("d1+d2", d1 + d2)],
            || -(e * c2 * c2 / (d1 * (d1 + d2))) * p0 * p0 * i0,
        ),
        eval_constant("C7", rv(0, 2, 1), 2, &[("d1", d1), ("d2", d2)], || {
            e * e * c2 * c2 / (two * d2 * d1) * i0 * i0 * p0
        }),
    ]
}

/// The split parenthesization of A8: the second printed bracket multiplying
/// only the 1/K part of the prefactor.
fn a8_alternate<T: Real>(params: &ModelParams<T>, ics: &InitialState<T>) -> Option<T> {
    let ModelParams {
        r, k, delta, d1, ..
    } = *params;
    let two = T::int(2);
    if r - d1 == T::zero() || r == T::zero() || k == T::zero() || d1 == T::zero() {
        return None;
    }
    Some(
        -(T::one() / (r - d1))
            * (delta / r + (T::one() / k) * (two * r * r / (k * d1) - r / k + delta))
            * ics.s0
            * ics.s0
            * ics.i0,
    )
}

/// Evaluate every printed formula verbatim.
///
/// Fails with [`ResonantParameters`] when any printed denominator vanishes,
/// naming each vanishing denominator once.
pub fn paper_coefficients<T: Real>(
    params: &ModelParams<T>,
    ics: &InitialState<T>,
) -> Result<PaperCoefficients<T>, ResonantParameters> {
    let table = constant_table(params, ics);
    let mut vanished: Vec<String> = Vec::new();
    for entry in &table {
        for name in &entry.vanished {
            if !vanished.iter().any(|v| v == name) {
                vanished.push((*name).to_string());
            }
        }
    }
    if !vanished.is_empty() {
        return Err(ResonantParameters {
            denominators: vanished,
        });
    }

    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for entry in table {
        let constant = PaperConstant {
            name: entry.name,
            rate: entry.rate,
            order: entry.order,
            value: entry.value.expect("checked defined above"),
        };
        match entry.name.as_bytes()[0] {
            b'A' => a.push(constant),
            b'B' => b.push(constant),
            _ => c.push(constant),
        }
    }
    Ok(PaperCoefficients {
        a,
        b,
        c,
        a8_alternate: a8_alternate(params, ics).expect("denominators checked"),
    })
}

/// The printed series as exp-poly values: zeroth-order exponential plus the
/// constants of each variable.
pub fn paper_series<T: Real>(
    coeffs: &PaperCoefficients<T>,
    ics: &InitialState<T>,
) -> [ExpPolySeries<T>; 3] {
    let build = |lead: T, lead_rate: RateVector, constants: &[PaperConstant<T>]| {
        let mut series = ExpPolySeries::term(lead, 0, lead_rate);
        for constant in constants {
            series.add_term(constant.value, 0, constant.rate);
        }
        series
    };
    [
        build(ics.s0, RateVector::R, &coeffs.a),
        build(ics.i0, RateVector::NEG_D1, &coeffs.b),
        build(ics.p0, RateVector::NEG_D2, &coeffs.c),
    ]
}

/// Numeric value of the printed series at `t`.
pub fn evaluate_paper_series<T: Real>(
    coeffs: &PaperCoefficients<T>,
    params: &ModelParams<T>,
    ics: &InitialState<T>,
    t: T,
) -> [T; 3] {
    let [s, i, p] = paper_series(coeffs, ics);
    [
        s.evaluate(params, t),
        i.evaluate(params, t),
        p.evaluate(params, t),
    ]
}

/// Audit verdict for one printed constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::Undefined => "UNDEFINED",
        })
    }
}

/// Per-constant comparison between printed value and engine coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditRecord<T> {
    pub name: &'static str,
    pub rate: RateVector,
    pub order: usize,
    pub printed: Option<T>,
    pub derived: T,
    pub abs_diff: Option<T>,
    pub rel_diff: Option<T>,
    pub verdict: Verdict,
}

/// An exponent the engine correction carries but the printed series lacks.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralFinding<T> {
    pub variable: char,
    pub rate: RateVector,
    pub coeff: T,
}

/// Full audit output: header notes/warnings, one record per printed
/// constant, structural exponent differences.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport<T> {
    pub params: ModelParams<T>,
    pub ics: InitialState<T>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    pub records: Vec<AuditRecord<T>>,
    /// Exponents present in the engine correction but absent from the
    /// printed series (the homogeneous top-ups, chiefly).
    pub engine_only: Vec<StructuralFinding<T>>,
    /// Printed exponents with no engine counterpart.
    pub printed_only: Vec<(char, RateVector)>,
}

/// Deviation against the smaller-magnitude side, so a factor-q discrepancy
/// reports q - 1 no matter which side is printed larger. Zero when the two
/// values are identical (including both zero); infinite when exactly one
/// side is zero.
pub fn relative_difference<T: Real>(printed: T, derived: T) -> T {
    if printed == derived {
        return T::zero();
    }
    let denom = printed.abs().min(derived.abs());
    if denom == T::zero() {
        T::infinity()
    } else {
        (printed - derived).abs() / denom
    }
}

impl<T: Real> AuditReport<T> {
    pub fn match_count(&self) -> usize {
        self.count(Verdict::Match)
    }

    pub fn mismatch_count(&self) -> usize {
        self.count(Verdict::Mismatch)
    }

    pub fn undefined_count(&self) -> usize {
        self.count(Verdict::Undefined)
    }

    fn count(&self, verdict: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn record(&self, name: &str) -> Option<&AuditRecord<T>> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Human-readable table; byte-identical for identical inputs.
    pub fn render_table(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let p = &self.params;
        writeln!(out, "printed-series coefficient audit").unwrap();
        writeln!(
            out,
            "params: r={} K={} c1={} c2={} delta={} e={} d1={} d2={}",
            p.r, p.k, p.c1, p.c2, p.delta, p.e, p.d1, p.d2
        )
        .unwrap();
        writeln!(
            out,
            "initial: S0={} I0={} P0={}",
            self.ics.s0, self.ics.i0, self.ics.p0
        )
        .unwrap();
        for note in &self.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        for warning in &self.warnings {
            writeln!(out, "warning: {warning}").unwrap();
        }
        writeln!(
            out,
            "{:<5} {:<10} {:>14} {:>14} {:>12}  verdict",
            "name", "exponent", "printed", "derived", "rel-diff"
        )
        .unwrap();
        for record in &self.records {
            let printed = match record.printed {
                Some(v) => format!("{:.6e}", v),
                None => "-".to_string(),
            };
            let rel = match record.rel_diff {
                Some(v) => format!("{:.4e}", v),
                None => "-".to_string(),
            };
            writeln!(
                out,
                "{:<5} {:<10} {:>14} {:>14.6e} {:>12}  {}",
                record.name,
                record.rate.symbol(),
                printed,
                record.derived,
                rel,
                record.verdict
            )
            .unwrap();
        }
        if self.engine_only.is_empty() {
            writeln!(out, "structural: engine-only exponents: none").unwrap();
        } else {
            writeln!(
                out,
                "structural: engine-only exponents (corrections the printed series lacks):"
            )
            .unwrap();
            for finding in &self.engine_only {
                writeln!(
                    out,
                    "  {}: {} (coeff {:.6e})",
                    finding.variable,
                    finding.rate.symbol(),
                    finding.coeff
                )
                .unwrap();
            }
        }
        if self.printed_only.is_empty() {
            writeln!(out, "structural: printed-only exponents: none").unwrap();
        } else {
            writeln!(out, "structural: printed-only exponents:").unwrap();
            for (variable, rate) in &self.printed_only {
                writeln!(out, "  {}: {}", variable, rate.symbol()).unwrap();
            }
        }
        writeln!(
            out,
            "summary: {} MATCH, {} MISMATCH, {} UNDEFINED",
            self.match_count(),
            self.mismatch_count(),
            self.undefined_count()
        )
        .unwrap();
        out
    }

    /// Machine-readable record stream: one CSV line per constant at full
    /// precision.
    pub fn render_records(&self) -> String {
        use std::fmt::Write;
        let num = |v: Option<T>| v.map(|x| format!("{:.16e}", x)).unwrap_or_default();
        let mut out =
            String::from("name,exponent,order,printed,derived,abs_diff,rel_diff,verdict\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{:.16e},{},{},{}",
                r.name,
                r.rate.symbol(),
                r.order,
                num(r.printed),
                r.derived,
                num(r.abs_diff),
                num(r.rel_diff),
                r.verdict
            )
            .unwrap();
        }
        out
    }
}

/// Compare every printed constant against the engine coefficient of the
/// identical exponent, order by order.
///
/// First-order constants are read off the order-1 components and
/// second-order constants off the order-2 components: the engine's zero
/// initial values add homogeneous terms at each order whose products pollute
/// first-order exponents inside order 2, so the assembled sum would mix the
/// two. The per-order coefficients are exactly what the printed recursion
/// defines; the assembled view is still used for the structural findings.
pub fn audit<T: Real>(params: &ModelParams<T>, ics: &InitialState<T>) -> AuditReport<T> {
    let table = constant_table(params, ics);
    let mut expansion = HpmExpansion::new(ics);
    expansion.extend_to(params, 2);

    let match_tolerance = T::lit(1e-9);
    let mut records = Vec::with_capacity(table.len());
    for entry in &table {
        let component = match entry.name.as_bytes()[0] {
            b'A' => &expansion.s_terms()[entry.order],
            b'B' => &expansion.i_terms()[entry.order],
            _ => &expansion.p_terms()[entry.order],
        };
        let derived = component.coefficient(0, entry.rate);
        let (abs_diff, rel_diff, verdict) = match entry.value {
            None => (None, None, Verdict::Undefined),
            Some(printed) => {
                let rel = relative_difference(printed, derived);
                let verdict = if rel <= match_tolerance {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                };
                (Some((printed - derived).abs()), Some(rel), verdict)
            }
        };
        records.push(AuditRecord {
            name: entry.name,
            rate: entry.rate,
            order: entry.order,
            printed: entry.value,
            derived,
            abs_diff,
            rel_diff,
            verdict,
        });
    }

    // Structural comparison against the assembled correction (orders 1-2).
    let (s0, i0, p0) = zeroth_order(ics);
    let assembled = expansion.assemble(2);
    let corrections = [
        ('S', assembled.s.minus(&s0)),
        ('I', assembled.i.minus(&i0)),
        ('P', assembled.p.minus(&p0)),
    ];
    let printed_rates = |prefix: u8| -> std::collections::BTreeSet<RateVector> {
        table
            .iter()
            .filter(|e| e.name.as_bytes()[0] == prefix)
            .map(|e| e.rate)
            .collect()
    };
    let mut engine_only = Vec::new();
    let mut printed_only = Vec::new();
    for (variable, correction) in &corrections {
        let printed = printed_rates(match variable {
            'S' => b'A',
            'I' => b'B',
            _ => b'C',
        });
        for rate in correction.rate_set() {
            if !printed.contains(&rate) {
                engine_only.push(StructuralFinding {
                    variable: *variable,
                    rate,
                    coeff: correction.coefficient(0, rate),
                });
            }
        }
        for rate in printed {
            if !correction.rate_set().contains(&rate) {
                printed_only.push((*variable, rate));
            }
        }
    }

    let mut notes = vec![
        "B3/C3 grouping: every bracketed term multiplies the full printed initial-value product"
            .to_string(),
    ];
    let a8 = table.iter().find(|e| e.name == "A8").expect("A8 present");
    match (a8.value, a8_alternate(params, ics)) {
        (Some(primary), Some(alternate)) => {
            let derived = expansion.s_terms()[2].coefficient(0, a8.rate);
            let primary_rel = relative_difference(primary, derived);
            let alternate_rel = relative_difference(alternate, derived);
            let closer = if primary_rel <= alternate_rel {
                "product-of-brackets"
            } else {
                "split-bracket"
            };
            notes.push(format!(
                "A8 grouping: product-of-brackets rel-diff {:.4e}, split-bracket rel-diff {:.4e}; {} reading is closer to derived",
                primary_rel, alternate_rel, closer
            ));
        }
        _ => notes.push("A8 grouping: undefined for these parameters".to_string()),
    }

    let mut warnings = Vec::new();
    if params.d1 == params.d2 {
        warnings.push(
            "d1 = d2: distinct printed formulas coincide numerically; mismatches can be masked"
                .to_string(),
        );
    }
    if params.r == params.d1 {
        warnings.push("r = d1: constants with denominator (r-d1) are undefined".to_string());
    }
    if params.r == params.d2 {
        warnings.push("r = d2: constants with denominator (r-d2) are undefined".to_string());
    }

    AuditReport {
        params: *params,
        ics: *ics,
        notes,
        warnings,
        records,
        engine_only,
        printed_only,
    }
}
