//! The sweeps. Each experiment turns its settings into a grid of input
//! points and a per-point computation producing one or more rows.

use std::f64::consts::SQRT_2;

use clap::Subcommand;
use rayon::prelude::*;

use catamp::circuits::{
    amplify, fidelity_with_pure, generate_pssv, heralded_fidelity, heralded_success, heralded_wigner_at,
    optimize_input_for_target, optimize_target_size, perr, InputFamily, SuccessKind,
};
use catamp::iterate::{effective_size, linear_exponent_form, stages, success_scaling, Evaluation, HeraldMode};
use catamp::states::{self, wf_cat, wf_squeezed_fock1};
use catamp::{CatSpec, Error, Parity, PolyGaussWavefunction, Projection, SqueezingSpec};

use crate::output::{Row, Status, Table, Value};
use crate::settings::Settings;
use crate::CliError;

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    /// PSSV fidelity with cats over squeezing (--xi) and target size (--beta, omit to
    /// optimize), at fixed --T and --epsilon
    PssvScan,
    /// PSSV fidelity under impure squeezing: --xi fixed, anti-squeezing set by --epsilon
    /// or --purity, target size --beta (omit to optimize)
    PssvPurity,
    /// Amplified fidelity with even cats κ₊(β) from two odd cats, over --alpha and --beta
    /// at homodyne window --window
    CatAmpScan,
    /// Input odd-cat size best reaching each target --beta, with fidelity and success
    CatAmpOptimal,
    /// Fidelity with κ₊(√2α) and success of amplifying two odd cats, over --alpha and
    /// --window
    WindowRobustness,
    /// Amplified PSSV fidelity with κ₊(β) over input squeezing --xi and --beta
    PssvAmpScan,
    /// Input squeezing best reaching each target --beta from two PSSVs, with the input
    /// PSSV's own best odd-cat match
    BackwardOpt,
    /// Amplified PSSV fidelity and success as impurity (--epsilon or --purity) or
    /// window (--window) vary around a working point
    Robustness,
    /// Effective size and fidelity of each stage of recursive amplification from a
    /// squeezed photon (--xi) or odd cat (--alpha) seed
    Iterate,
    /// Per-stage and compound heralding success of recursive amplification; density at
    /// x = 0 unless --window is given
    SuccessScaling,
    /// Probability of mistaking κ₊(β) for vacuum with a homodyne window, over --beta
    /// and --window
    Perr,
    /// Wigner function of the amplified output of two odd cats on an x-p --grid
    WignerGrid,
}

pub const ALL: [Experiment; 12] = [
    Experiment::PssvScan,
    Experiment::PssvPurity,
    Experiment::CatAmpScan,
    Experiment::CatAmpOptimal,
    Experiment::WindowRobustness,
    Experiment::PssvAmpScan,
    Experiment::BackwardOpt,
    Experiment::Robustness,
    Experiment::Iterate,
    Experiment::SuccessScaling,
    Experiment::Perr,
    Experiment::WignerGrid,
];

type Params = &'static [(&'static str, Option<&'static str>)];

type Compute = Box<dyn Fn(&[f64]) -> catamp::Result<Vec<Row>> + Sync>;

/// A grid of input points and how to evaluate each.
pub struct Plan {
    pub input_columns: Vec<String>,
    pub output_columns: Vec<String>,
    pub points: Vec<Vec<f64>>,
    compute: Compute,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn run(&self) -> Table {
        let n_out = self.output_columns.len();
        let rows: Vec<Vec<Row>> = self
            .points
            .par_iter()
            .map(|p| {
                let rows = match (self.compute)(p) {
                    Ok(rows) => rows,
                    Err(e) => vec![failed(&e, n_out)],
                };
                rows.into_iter()
                    .map(|mut r| {
                        let mut values: Vec<Value> = p.iter().map(|&v| Value::Num(v)).collect();
                        values.append(&mut r.values);
                        r.values = values;
                        r
                    })
                    .collect()
            })
            .collect();
        Table {
            columns: self.input_columns.iter().chain(&self.output_columns).cloned().collect(),
            inputs: self.input_columns.len(),
            rows: rows.into_iter().flatten().collect(),
        }
    }
}

fn failed(e: &Error, n_out: usize) -> Row {
    let status = match e {
        Error::Underflow { .. } => Status::Underflow,
        _ => Status::Error,
    };
    Row {
        values: vec![Value::Num(f64::NAN); n_out],
        status,
        note: e.to_string(),
    }
}

fn ok(values: Vec<Value>) -> Row {
    Row {
        values,
        status: Status::Ok,
        note: String::new(),
    }
}

fn num(v: f64) -> Value {
    Value::Num(v)
}

fn cartesian(axes: &[(&str, Vec<f64>)]) -> (Vec<String>, Vec<Vec<f64>>) {
    let names = axes.iter().map(|a| a.0.to_string()).collect();
    let mut points = vec![Vec::new()];
    for (_, values) in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    (names, points)
}

fn projection(window: f64) -> catamp::Result<Projection> {
    if window == 0.0 {
        Ok(Projection::slice())
    } else {
        Projection::window(window)
    }
}

fn kind_name(kind: SuccessKind) -> Value {
    Value::Text(match kind {
        SuccessKind::Probability => "probability".into(),
        SuccessKind::Density => "density".into(),
    })
}

fn parity(settings: &Settings) -> Result<Parity, CliError> {
    Ok(match settings.choice("parity", &["odd", "even"])?.as_str() {
        "odd" => Parity::Odd,
        _ => Parity::Even,
    })
}

/// Squeezing from `xi` and either `purity` (if set) or `epsilon`.
fn squeezing(xi: f64, impurity: f64, by_purity: bool) -> catamp::Result<SqueezingSpec> {
    if by_purity {
        SqueezingSpec::with_purity(-xi.abs(), impurity)
    } else {
        SqueezingSpec::impure(xi, impurity)
    }
}

/// The impurity axis: `--purity` if given, otherwise `--epsilon`.
fn impurity_axis(settings: &Settings) -> Result<(&'static str, Vec<f64>, bool), CliError> {
    match settings.optional_axis("purity")? {
        Some(v) => Ok(("purity", v, true)),
        None => Ok(("epsilon", settings.axis("epsilon")?, false)),
    }
}

/// Anti-squeezing plus whichever of epsilon and purity was not an input.
fn derived_columns(by_purity: bool) -> Vec<String> {
    strings(&["xi_x", if by_purity { "epsilon" } else { "purity" }])
}

fn derived_values(spec: &SqueezingSpec, by_purity: bool) -> Vec<Value> {
    let other = if by_purity { spec.epsilon() } else { spec.purity_closed_form() };
    vec![num(spec.xi_x()), num(other)]
}

enum Seed {
    Photon,
    Cat,
}

fn seed(settings: &Settings) -> Result<(Seed, &'static str, Vec<f64>), CliError> {
    match settings.choice("seed", &["squeezed-photon", "cat"])?.as_str() {
        "cat" => Ok((Seed::Cat, "alpha", settings.axis("alpha")?)),
        _ => Ok((Seed::Photon, "xi", settings.axis("xi")?)),
    }
}

fn seed_wavefunction(seed: &Seed, size: f64) -> catamp::Result<PolyGaussWavefunction> {
    match seed {
        Seed::Photon => wf_squeezed_fock1(SqueezingSpec::pure(size)?.scale_x()),
        Seed::Cat => Ok(wf_cat(&CatSpec::odd(size)?)),
    }
}

fn iterations(settings: &Settings) -> Result<usize, CliError> {
    Ok(settings.scalar("k")? as usize)
}

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::PssvScan => "pssv-scan",
            Experiment::PssvPurity => "pssv-purity",
            Experiment::CatAmpScan => "cat-amp-scan",
            Experiment::CatAmpOptimal => "cat-amp-optimal",
            Experiment::WindowRobustness => "window-robustness",
            Experiment::PssvAmpScan => "pssv-amp-scan",
            Experiment::BackwardOpt => "backward-opt",
            Experiment::Robustness => "robustness",
            Experiment::Iterate => "iterate",
            Experiment::SuccessScaling => "success-scaling",
            Experiment::Perr => "perr",
            Experiment::WignerGrid => "wigner-grid",
        }
    }

    /// Parameters the experiment reads, with defaults.
    pub fn params(&self) -> Params {
        match self {
            Experiment::PssvScan => &[
                ("xi", Some("0.8:15:50")),
                ("T", Some("0.99")),
                ("epsilon", Some("1")),
                ("beta", None),
                ("parity", Some("odd")),
            ],
            Experiment::PssvPurity => &[
                ("xi", Some("3")),
                ("epsilon", Some("1,1.1,1.2,1.3")),
                ("purity", None),
                ("T", Some("0.99")),
                ("beta", None),
                ("parity", Some("odd")),
            ],
            Experiment::CatAmpScan => &[
                ("alpha", Some("0.05:3:40")),
                ("beta", Some("0.05:4:50")),
                ("window", Some("1")),
            ],
            Experiment::CatAmpOptimal => &[("beta", Some("0.1:4:40")), ("window", Some("1"))],
            Experiment::WindowRobustness => &[("alpha", Some("0.1:3:30")), ("window", Some("0,1,2,4,8"))],
            Experiment::PssvAmpScan => &[
                ("xi", Some("0.2:6:30")),
                ("beta", Some("0.1:3:30")),
                ("T", Some("0.95")),
                ("epsilon", Some("1")),
                ("window", Some("1")),
            ],
            Experiment::BackwardOpt => &[
                ("beta", Some("0.5:3:26")),
                ("T", Some("0.95")),
                ("epsilon", Some("1")),
                ("window", Some("1")),
            ],
            Experiment::Robustness => &[
                ("xi", Some("2.9")),
                ("beta", Some("1.5")),
                ("T", Some("0.95")),
                ("epsilon", Some("1:1.5:11")),
                ("purity", None),
                ("window", Some("1")),
            ],
            Experiment::Iterate => &[
                ("seed", Some("squeezed-photon")),
                ("xi", Some("3")),
                ("alpha", Some("1")),
                ("k", Some("8")),
                ("exponent", Some("doubling")),
            ],
            Experiment::SuccessScaling => &[
                ("seed", Some("squeezed-photon")),
                ("xi", Some("0.5,1,2,3,6,9")),
                ("alpha", Some("1")),
                ("k", Some("6")),
                ("window", None),
            ],
            Experiment::Perr => &[("beta", Some("0:4:41")), ("window", Some("0.1:10:25"))],
            Experiment::WignerGrid => &[
                ("alpha", Some("1")),
                ("window", Some("1,5,10")),
                ("grid", Some("-4:4:81")),
            ],
        }
    }

    pub fn plan(&self, s: &Settings) -> Result<Plan, CliError> {
        let plan = match self {
            Experiment::PssvScan | Experiment::PssvPurity => {
                let target = parity(s)?;
                let purity_mode = *self == Experiment::PssvPurity;
                let (imp_name, imp_values, by_purity) = if purity_mode {
                    impurity_axis(s)?
                } else {
                    ("epsilon", s.axis("epsilon")?, false)
                };
                let beta = s.optional_axis("beta")?;
                let mut axes = vec![("xi", s.axis("xi")?), (imp_name, imp_values), ("T", s.axis("T")?)];
                let mut outputs = if purity_mode { derived_columns(by_purity) } else { vec![] };
                match &beta {
                    Some(b) => {
                        axes.push(("beta", b.clone()));
                        outputs.extend(strings(&["fidelity", "success"]));
                    }
                    None => outputs.extend(strings(&["beta_opt", "fidelity", "success", "at_edge"])),
                }
                let (names, points) = cartesian(&axes);
                let fixed_beta = beta.is_some();
                Plan {
                    input_columns: names,
                    output_columns: outputs,
                    points,
                    compute: Box::new(move |p| {
                        let spec = squeezing(p[0], p[1], by_purity)?;
                        let pssv = generate_pssv(&spec, p[2])?;
                        let mut row = Vec::new();
                        if purity_mode {
                            row.extend(derived_values(&spec, by_purity));
                        }
                        if fixed_beta {
                            let target = states::cat(&CatSpec::new(p[3], target)?);
                            row.extend([num(fidelity_with_pure(&pssv.state, &target)?), num(pssv.success)]);
                        } else {
                            let r = optimize_target_size(&pssv, target)?;
                            row.extend([
                                num(r.argument),
                                num(r.fidelity),
                                num(pssv.success),
                                Value::Bool(r.at_edge),
                            ]);
                        }
                        Ok(vec![ok(row)])
                    }),
                }
            }
            Experiment::CatAmpScan => {
                let (names, points) =
                    cartesian(&[("alpha", s.axis("alpha")?), ("beta", s.axis("beta")?), ("window", s.axis("window")?)]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["fidelity", "success", "success_kind"]),
                    points,
                    compute: Box::new(|p| {
                        let input = states::cat(&CatSpec::odd(p[0])?);
                        let h = amplify(&input, &input, projection(p[2])?)?;
                        let success = heralded_success(&h)?;
                        let f = heralded_fidelity(&h, &CatSpec::even(p[1])?)?;
                        Ok(vec![ok(vec![num(f), num(success.value()), kind_name(success.kind)])])
                    }),
                }
            }
            Experiment::CatAmpOptimal => {
                let (names, points) = cartesian(&[("beta", s.axis("beta")?), ("window", s.axis("window")?)]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["alpha_opt", "fidelity", "success", "at_edge"]),
                    points,
                    compute: Box::new(|p| {
                        let r = optimize_input_for_target(p[0], InputFamily::IdealCat, projection(p[1])?)?;
                        Ok(vec![ok(vec![
                            num(r.argument),
                            num(r.fidelity),
                            num(r.success_probability.unwrap_or(f64::NAN)),
                            Value::Bool(r.at_edge),
                        ])])
                    }),
                }
            }
            Experiment::WindowRobustness => {
                let (names, points) = cartesian(&[("alpha", s.axis("alpha")?), ("window", s.axis("window")?)]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["beta", "fidelity", "success", "success_kind"]),
                    points,
                    compute: Box::new(|p| {
                        let input = states::cat(&CatSpec::odd(p[0])?);
                        let h = amplify(&input, &input, projection(p[1])?)?;
                        let beta = SQRT_2 * p[0];
                        let success = heralded_success(&h)?;
                        let f = heralded_fidelity(&h, &CatSpec::even(beta)?)?;
                        Ok(vec![ok(vec![num(beta), num(f), num(success.value()), kind_name(success.kind)])])
                    }),
                }
            }
            Experiment::PssvAmpScan => {
                let (names, points) = cartesian(&[
                    ("xi", s.axis("xi")?),
                    ("beta", s.axis("beta")?),
                    ("T", s.axis("T")?),
                    ("epsilon", s.axis("epsilon")?),
                    ("window", s.axis("window")?),
                ]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["fidelity", "success", "pssv_success"]),
                    points,
                    compute: Box::new(|p| {
                        let pssv = generate_pssv(&SqueezingSpec::impure(p[0], p[3])?, p[2])?;
                        let h = amplify(&pssv.state, &pssv.state, projection(p[4])?)?;
                        let f = heralded_fidelity(&h, &CatSpec::even(p[1])?)?;
                        let success = heralded_success(&h)?.value();
                        Ok(vec![ok(vec![num(f), num(success), num(pssv.success)])])
                    }),
                }
            }
            Experiment::BackwardOpt => {
                let (names, points) = cartesian(&[
                    ("beta", s.axis("beta")?),
                    ("T", s.axis("T")?),
                    ("epsilon", s.axis("epsilon")?),
                    ("window", s.axis("window")?),
                ]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&[
                        "xi_opt",
                        "fidelity",
                        "success",
                        "at_edge",
                        "pssv_alpha",
                        "pssv_fidelity",
                        "pssv_success",
                    ]),
                    points,
                    compute: Box::new(|p| {
                        let family = InputFamily::Pssv { t: p[1], epsilon: p[2] };
                        let r = optimize_input_for_target(p[0], family, projection(p[3])?)?;
                        let pssv = generate_pssv(&SqueezingSpec::impure(r.argument, p[2])?, p[1])?;
                        let fit = optimize_target_size(&pssv, Parity::Odd)?;
                        Ok(vec![ok(vec![
                            num(r.argument),
                            num(r.fidelity),
                            num(r.success_probability.unwrap_or(f64::NAN)),
                            Value::Bool(r.at_edge),
                            num(fit.argument),
                            num(fit.fidelity),
                            num(pssv.success),
                        ])])
                    }),
                }
            }
            Experiment::Robustness => {
                let (imp_name, imp_values, by_purity) = impurity_axis(s)?;
                let (names, points) = cartesian(&[
                    ("xi", s.axis("xi")?),
                    ("beta", s.axis("beta")?),
                    ("T", s.axis("T")?),
                    (imp_name, imp_values),
                    ("window", s.axis("window")?),
                ]);
                Plan {
                    input_columns: names,
                    output_columns: [derived_columns(by_purity), strings(&["fidelity", "success"])].concat(),
                    points,
                    compute: Box::new(move |p| {
                        let spec = squeezing(p[0], p[3], by_purity)?;
                        let pssv = generate_pssv(&spec, p[2])?;
                        let h = amplify(&pssv.state, &pssv.state, projection(p[4])?)?;
                        let f = heralded_fidelity(&h, &CatSpec::even(p[1])?)?;
                        let success = heralded_success(&h)?.value();
                        let mut row = derived_values(&spec, by_purity);
                        row.extend([num(f), num(success)]);
                        Ok(vec![ok(row)])
                    }),
                }
            }
            Experiment::Iterate => {
                let (seed, size_name, sizes) = seed(s)?;
                let k = iterations(s)?;
                let linear = s.choice("exponent", &["doubling", "linear"])? == "linear";
                let (names, points) = cartesian(&[(size_name, sizes)]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["k", "beta", "fidelity", "ln_density", "evaluation"]),
                    points,
                    compute: Box::new(move |p| {
                        let phi0 = seed_wavefunction(&seed, p[0])?;
                        if linear {
                            return (0..=k)
                                .map(|j| {
                                    let r = effective_size(&linear_exponent_form(&phi0, j)?);
                                    Ok(ok(vec![
                                        Value::Int(j as i64),
                                        num(r.argument),
                                        num(r.fidelity),
                                        num(f64::NAN),
                                        Value::Text("linear-exponent".into()),
                                    ]))
                                })
                                .collect();
                        }
                        stages(&phi0, k)?
                            .iter()
                            .map(|stage| {
                                let r = stage.effective_size()?;
                                let method = match stage.evaluation() {
                                    Evaluation::ClosedForm => "closed-form",
                                    Evaluation::SeedPower => "seed-power",
                                };
                                Ok(ok(vec![
                                    Value::Int(stage.index() as i64),
                                    num(r.argument),
                                    num(r.fidelity),
                                    num(stage.ln_density().unwrap_or(f64::NAN)),
                                    Value::Text(method.into()),
                                ]))
                            })
                            .collect()
                    }),
                }
            }
            Experiment::SuccessScaling => {
                let (seed, size_name, sizes) = seed(s)?;
                let k = iterations(s)?;
                let mode = match s.optional_axis("window")? {
                    None => HeraldMode::Density,
                    Some(w) => match w.as_slice() {
                        [w] if *w == 0.0 => HeraldMode::Density,
                        [w] if w.is_finite() => HeraldMode::Window(*w),
                        _ => return Err(CliError::Usage("--window takes one finite width here".into())),
                    },
                };
                let convention = match mode {
                    HeraldMode::Density => "density",
                    HeraldMode::Window(_) => "window",
                };
                let (names, points) = cartesian(&[(size_name, sizes)]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&[
                        "stage",
                        "ln_stage",
                        "ln_compound",
                        "stage_value",
                        "compound_value",
                        "convention",
                    ]),
                    points,
                    compute: Box::new(move |p| {
                        let phi0 = seed_wavefunction(&seed, p[0])?;
                        let rows = success_scaling(&phi0, k, mode)?
                            .into_iter()
                            .map(|st| {
                                let compound = st.compound_value();
                                let mut row = ok(vec![
                                    Value::Int(st.stage as i64),
                                    num(st.ln_stage),
                                    num(st.ln_compound),
                                    num(st.stage_value()),
                                    num(compound),
                                    Value::Text(convention.into()),
                                ]);
                                if compound == 0.0 || !compound.is_normal() {
                                    row.status = Status::Underflow;
                                    row.note = "compound value below the linear range; use ln_compound".into();
                                }
                                row
                            })
                            .collect();
                        Ok(rows)
                    }),
                }
            }
            Experiment::Perr => {
                let windows = s.axis("window")?;
                if windows.contains(&0.0) {
                    return Err(CliError::Usage("perr needs windows wider than 0".into()));
                }
                let (names, points) = cartesian(&[("beta", s.axis("beta")?), ("window", windows)]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["perr"]),
                    points,
                    compute: Box::new(|p| Ok(vec![ok(vec![num(perr(p[0], p[1])?)])])),
                }
            }
            Experiment::WignerGrid => {
                let grid = s.axis("grid")?;
                let (names, points) = cartesian(&[
                    ("alpha", s.axis("alpha")?),
                    ("window", s.axis("window")?),
                    ("x", grid.clone()),
                    ("p", grid),
                ]);
                Plan {
                    input_columns: names,
                    output_columns: strings(&["wigner"]),
                    points,
                    compute: Box::new(|p| {
                        let input = states::cat(&CatSpec::odd(p[0])?);
                        let h = amplify(&input, &input, projection(p[1])?)?;
                        Ok(vec![ok(vec![num(heralded_wigner_at(&h, p[2], p[3])?)])])
                    }),
                }
            }
        };
        Ok(plan)
    }
}
