//! Resolution of command-line options into engine requests, and their
//! evaluation into JSON reports.

use serde::Serialize;
use serde_json::{json, Value};

use ns2_core::coset::Coset;
use ns2_core::irreducible::IrreducibleModule;
use ns2_core::lattice::Lattice;
use ns2_core::minimal::{self, classify_chirality, Convention, FusionError, MinimalLabel};
use ns2_core::oddvar::OddCalculus;
use ns2_core::pbw::{Grade, PbwModule};
use ns2_core::{Half, Rat, Scalar};

use crate::args::{Cli, Command, CosetAction, OddvarAction, Options};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("missing required option --{0}")]
    Missing(&'static str),
    #[error(transparent)]
    Label(#[from] FusionError),
    #[error("{0}")]
    Invalid(String),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

/// A fully resolved request. Its serialization is the cache key.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    Spectrum { m: u32, convention: Convention },
    Gram { label: MinimalLabel, level: Half, charge: i64 },
    Singular { label: MinimalLabel, level: Half, charge: i64 },
    Character { label: MinimalLabel, cutoff: Half },
    FusionBound { labels: [MinimalLabel; 3] },
    Chirality { m: u32, convention: Convention, label: Option<MinimalLabel> },
    CosetVerify { label: MinimalLabel, cutoff: Half, window: u32, index: u32 },
    CosetDecompose { label: MinimalLabel, cutoff: Half, window: u32 },
    OddvarCheck { m: u32, c: Scalar, max_weight: Half, cutoff: Half, index: u32 },
}

/// The payload of a finished request.
#[derive(Debug, Clone)]
pub struct Report {
    pub payload: Value,
    pub verified: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("engine values serialize to JSON")
}

fn nonnegative(name: &str, h: Half) -> Result<Half, CliError> {
    if h < Half::ZERO {
        return Err(CliError::Invalid(format!("--{name} must be nonnegative, got {h}")));
    }
    Ok(h)
}

impl Options {
    fn m(&self) -> Result<u32, CliError> {
        match self.m {
            Some(0) => Err(CliError::Invalid("--m must be positive".into())),
            Some(m) => Ok(m),
            None => Err(CliError::Missing("m")),
        }
    }

    fn label(&self) -> Result<MinimalLabel, CliError> {
        let m = self.m()?;
        let l = match &self.label {
            Some(s) => s.parse::<MinimalLabel>()?,
            None => MinimalLabel::vacuum(m),
        };
        self.admissible(l.at_level(m)?)
    }

    fn admissible(&self, l: MinimalLabel) -> Result<MinimalLabel, CliError> {
        if l.is_admissible(self.convention) {
            Ok(l)
        } else {
            Err(CliError::Invalid(format!("label {l} is outside the m = {} spectrum", l.m)))
        }
    }

    fn labels(&self) -> Result<[MinimalLabel; 3], CliError> {
        let m = self.m()?;
        let text = self.labels.as_deref().ok_or(CliError::Missing("labels"))?;
        let parsed = text
            .split(';')
            .map(|s| self.admissible(s.parse::<MinimalLabel>()?.at_level(m)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        parsed.try_into().map_err(|v: Vec<_>| CliError::Invalid(format!("--labels needs three labels, got {}", v.len())))
    }

    fn level(&self) -> Result<Half, CliError> {
        nonnegative("level", self.level.ok_or(CliError::Missing("level"))?)
    }

    fn cutoff_or(&self, default: Half) -> Result<Half, CliError> {
        nonnegative("cutoff", self.cutoff.unwrap_or(default))
    }
}

impl Request {
    pub fn from_cli(cli: &Cli) -> Result<Request, CliError> {
        let o = &cli.opts;
        Ok(match &cli.command {
            Command::Spectrum => Request::Spectrum { m: o.m()?, convention: o.convention },
            Command::Gram => Request::Gram { label: o.label()?, level: o.level()?, charge: o.charge.unwrap_or(0) },
            Command::Singular => Request::Singular { label: o.label()?, level: o.level()?, charge: o.charge.unwrap_or(0) },
            Command::Character => Request::Character { label: o.label()?, cutoff: o.cutoff_or(Half::int(4))? },
            Command::FusionBound => Request::FusionBound { labels: o.labels()? },
            Command::Chirality => Request::Chirality {
                m: o.m()?,
                convention: o.convention,
                label: o.label.as_ref().map(|_| o.label()).transpose()?,
            },
            Command::Coset { action: CosetAction::Verify } => Request::CosetVerify {
                label: o.label()?,
                cutoff: o.cutoff_or(Half::from_twice(5))?,
                window: o.window.unwrap_or(2),
                index: o.index.unwrap_or(1).max(1),
            },
            Command::Coset { action: CosetAction::Decompose } => Request::CosetDecompose {
                label: o.label()?,
                cutoff: o.cutoff_or(Half::int(2))?,
                window: o.window.unwrap_or(3),
            },
            Command::Oddvar { action: OddvarAction::Check } => {
                let m = o.m()?;
                Request::OddvarCheck {
                    m,
                    c: MinimalLabel::vacuum(m).c(),
                    max_weight: nonnegative("level", o.level.unwrap_or(Half::int(2)))?,
                    cutoff: o.cutoff_or(Half::from_twice(7))?,
                    index: o.index.unwrap_or(2),
                }
            }
        })
    }

    pub fn key(&self) -> Value {
        to_value(self)
    }

    /// JSON pointer of the table emitted in CSV mode.
    pub fn table(&self) -> &'static str {
        match self {
            Request::Spectrum { .. } | Request::Chirality { .. } => "/labels",
            Request::Gram { .. } => "/entries",
            Request::Singular { .. } => "/vectors",
            Request::Character { .. } => "/character/coefficients",
            Request::CosetDecompose { .. } => "/decomposition/highest_weights",
            Request::FusionBound { .. } | Request::CosetVerify { .. } | Request::OddvarCheck { .. } => "",
        }
    }

    pub fn run(&self) -> Result<Report, CliError> {
        let ok = |payload| Ok(Report { payload, verified: true });
        match self {
            Request::Spectrum { m, convention } => {
                let labels = minimal::spectrum(*m, *convention);
                ok(json!({"m": m, "convention": convention, "count": labels.len(), "labels": labels}))
            }
            Request::Gram { label, level, charge } => {
                let verma = PbwModule::verma(label.params());
                let grade = Grade::new(*level, *charge);
                let gram = verma.gram(grade);
                let mut payload = to_value(&*gram);
                let extra = json!({
                    "label": label,
                    "dim": gram.dim(),
                    "rank": gram.rank(),
                    "irreducible_dim": verma.irreducible_dim(grade),
                });
                merge(&mut payload, extra);
                ok(payload)
            }
            Request::Singular { label, level, charge } => {
                let verma = PbwModule::verma(label.params());
                let grade = Grade::new(*level, *charge);
                match verma.singular_vectors(grade) {
                    Ok(vectors) => ok(json!({
                        "label": label,
                        "grade": grade,
                        "count": vectors.len(),
                        "vectors": vectors,
                    })),
                    Err(e) => Ok(Report {
                        payload: json!({"label": label, "grade": grade, "error": e.to_string()}),
                        verified: false,
                    }),
                }
            }
            Request::Character { label, cutoff } => {
                let verma = PbwModule::verma(label.params());
                ok(json!({"label": label, "character": verma.character(*cutoff)}))
            }
            Request::FusionBound { labels: [a, b, c] } => {
                let bound = minimal::fusion_upper_bound(a, b, c)?;
                let exponent = minimal::leading_exponent(a, b, c)?;
                let defect = &(&(&c.q() - &a.q()) - &b.q()) * &Scalar::from_rat(Rat::from_int(a.m as i64 + 2));
                ok(json!({
                    "labels": [a, b, c],
                    "bound": bound,
                    "leading_exponent": exponent,
                    "charge_defect": defect,
                    "first_chirality": classify_chirality(a),
                }))
            }
            Request::Chirality { m, convention, label } => {
                let labels = match label {
                    Some(l) => vec![*l],
                    None => minimal::spectrum(*m, *convention),
                };
                let rows: Vec<Value> = labels
                    .iter()
                    .map(|l| {
                        let ch = classify_chirality(l);
                        json!({
                            "label": l,
                            "chirality": ch,
                            "chiral": ch.is_chiral(),
                            "anti_chiral": ch.is_anti_chiral(),
                        })
                    })
                    .collect();
                ok(json!({"m": m, "convention": convention, "labels": rows}))
            }
            Request::CosetVerify { label, cutoff, window, index } => {
                let irr = IrreducibleModule::new(label.params());
                let lattice = Lattice::default();
                let coset = Coset::new(label.m, &irr, &lattice);
                let affine = coset.verify_affine_relations(*cutoff, *window as i64, *index as i64);
                let rho = coset.verify_rho_and_virasoro(*cutoff, *window as i64, (*index).max(2) as i64);
                let summary = json!({
                    "affine_relations": affine.relations.values().all(|r| r.passed()),
                    "level": affine.measured_levels,
                    "level_matches_m": affine.measured_levels == vec![Scalar::from_int(label.m as i64)],
                    "rho_commutes": rho.commutation_passed(),
                    "virasoro_identity": rho.identity_passed(),
                    "sl2_virasoro": rho.virasoro_passed(),
                });
                let verified = affine.passed() && rho.commutation_passed() && rho.identity_passed() && rho.virasoro_passed();
                Ok(Report {
                    payload: json!({
                        "label": label,
                        "cutoff": cutoff,
                        "window": window,
                        "index": index,
                        "passed": verified,
                        "summary": summary,
                        "affine": affine,
                        "rho": rho,
                    }),
                    verified,
                })
            }
            Request::CosetDecompose { label, cutoff, window } => {
                let irr = IrreducibleModule::new(label.params());
                let lattice = Lattice::default();
                let coset = Coset::new(label.m, &irr, &lattice);
                let dec = coset.find_affine_hw(*cutoff, *window as i64);
                let verified = dec.passed();
                Ok(Report {
                    payload: json!({
                        "label": label,
                        "cutoff": cutoff,
                        "window": window,
                        "passed": verified,
                        "labels_dominant": dec.labels_dominant(),
                        "decomposition": dec,
                    }),
                    verified,
                })
            }
            Request::OddvarCheck { c, max_weight, cutoff, index, .. } => {
                if *max_weight + Half::HALF > *cutoff {
                    return Err(CliError::Invalid(format!(
                        "--level {max_weight} needs a cutoff of at least {}",
                        *max_weight + Half::HALF
                    )));
                }
                let vac = PbwModule::vacuum(c.clone());
                let calc = OddCalculus::new(&vac, *cutoff);
                let report = calc.check_all(*max_weight, *index as i64);
                let verified = report.passed();
                Ok(Report { payload: json!({"passed": verified, "report": report}), verified })
            }
        }
    }
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}
