//! Batch command-line frontend: circuits, duals, structural checks, Symanzik
//! polynomials, tensor reduction and integrand emission for graph or matrix
//! inputs.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use feynmat::error::Error;
use feynmat::exact_linalg::{is_totally_unimodular, FieldTag, QMatrix, TuVerdict};
use feynmat::formats::{parse_matrix_literal, parse_matroid_record, write_matroid_record};
use feynmat::graph::FeynGraph;
use feynmat::integrand::{momentum_space_of_reduced, parametric, PolyDoc};
use feynmat::matroid::RepresentedMatroid;
use feynmat::symanzik::{phi_second_graph, psi_base_expansion, DotTable};
use feynmat::tensor_reduce::{scalarize, DotPair, ReduceOptions, Redundancy};

#[derive(Parser)]
#[command(name = "feynmat", version, about = "Feynman matroid toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FieldChoice {
    Q,
    F2,
    F3,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum DotBasis {
    Auto,
    Raw,
    EliminateLast,
    Diagonal,
}

#[derive(Args)]
struct CommonArgs {
    /// Graph document (JSON), matroid record or matrix literal.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Print the circuit system of the input's matroid.
    Circuits {
        #[command(flatten)]
        common: CommonArgs,
        /// Field to represent the matroid over.
        #[arg(long, value_enum, default_value = "q")]
        field: FieldChoice,
    },
    /// Print the dual of the input's matroid, in standard form.
    Dual {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "q")]
        field: FieldChoice,
    },
    /// Report 1PI, total unimodularity and regularity.
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// First and second Symanzik polynomials.
    Symanzik {
        #[command(flatten)]
        common: CommonArgs,
        /// First Symanzik polynomial (default when no flag is given).
        #[arg(long)]
        first: bool,
        /// Second Symanzik polynomial (graph inputs with >= 2 legs).
        #[arg(long)]
        second: bool,
        #[arg(long, value_enum, default_value = "auto")]
        dot_basis: DotBasis,
    },
    /// Turn numerator dot products into coextensions and scalar terms.
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated dot pairs, e.g. a1:a5,b:c.
        #[arg(long, required = true)]
        pairs: String,
        /// Pairs whose free coextension sign is flipped.
        #[arg(long, default_value = "")]
        flip_sign: String,
        /// Carry external legs as extra labeled columns.
        #[arg(long)]
        externals: bool,
    },
    /// Momentum-space and parametric integrand documents.
    Integrand {
        #[command(flatten)]
        common: CommonArgs,
        /// Optional dot pairs to reduce before emission.
        #[arg(long, default_value = "")]
        pairs: String,
        #[arg(long, default_value = "")]
        flip_sign: String,
        #[arg(long, value_enum, default_value = "auto")]
        dot_basis: DotBasis,
    },
}

enum Input {
    Graph(FeynGraph),
    Matrix(QMatrix),
}

fn read_input(path: &PathBuf) -> Result<Input, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        Ok(Input::Graph(FeynGraph::from_json(&text)?))
    } else if text.contains("ground:") {
        Ok(Input::Matrix(parse_matroid_record(&text)?.matrix))
    } else {
        Ok(Input::Matrix(parse_matrix_literal(&text)?))
    }
}

fn matroid_of(input: &Input) -> RepresentedMatroid {
    match input {
        Input::Graph(g) => g.cycle_matroid(),
        Input::Matrix(m) => RepresentedMatroid::from_row_space(m),
    }
}

fn parse_pairs(text: &str) -> Result<Vec<DotPair>, Error> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((a, b)) = part.split_once(':') else {
            return Err(Error::Schema(format!(
                "bad pair `{part}`; expected edge:edge"
            )));
        };
        out.push(DotPair::new(a.trim(), b.trim()));
    }
    Ok(out)
}

fn dot_table(basis: DotBasis, legs: Vec<String>) -> Result<DotTable, Error> {
    Ok(match basis {
        DotBasis::Raw => DotTable::raw(legs),
        DotBasis::EliminateLast => DotTable::eliminate_last(legs),
        DotBasis::Diagonal => DotTable::diagonal(legs)?,
        DotBasis::Auto => DotTable::auto(legs),
    })
}

/// Rewrap a prime-field matroid as an integer matrix for the text record.
fn gf_to_integer_matroid<const P: u32>(
    m: &RepresentedMatroid<feynmat::exact_linalg::Gf<P>>,
) -> Result<RepresentedMatroid, Error> {
    let rows: Vec<Vec<i64>> = (0..m.rank())
        .map(|i| {
            (0..m.size())
                .map(|j| m.matrix().at(i, j).residue() as i64)
                .collect()
        })
        .collect();
    let q = QMatrix::from_integer_rows(rows, m.ground().to_vec())?;
    RepresentedMatroid::new(q)
}

fn circuit_lines(cs: &feynmat::matroid::CircuitSystem) -> Vec<String> {
    cs.label_sets()
        .into_iter()
        .map(|c| {
            let names: Vec<String> = c.into_iter().collect();
            format!("{{{}}}", names.join(", "))
        })
        .collect()
}

fn circuits_json(cs: &feynmat::matroid::CircuitSystem) -> serde_json::Value {
    let circuits: Vec<Vec<String>> = cs
        .label_sets()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    json!({ "ground": cs.ground(), "circuits": circuits })
}

fn shifts_line(t: &feynmat::tensor_reduce::ScalarTerm) -> String {
    let shifts: Vec<String> = t
        .power_shift
        .iter()
        .map(|(e, v)| format!("{e}: {v}"))
        .collect();
    let mass = t.mass_factor.to_string();
    let mass_part = if mass == "1" {
        String::new()
    } else {
        format!(" * ({mass})")
    };
    format!(
        "{} * shift{{{}}}{}",
        t.coefficient,
        shifts.join(", "),
        mass_part
    )
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Circuits { common, field } => {
            let input = read_input(&common.input)?;
            let m = matroid_of(&input);
            let cs = match field {
                FieldChoice::Q => m.circuits(),
                FieldChoice::F2 => {
                    RepresentedMatroid::from_row_space(&m.matrix().cast_to_gf::<2>()?).circuits()
                }
                FieldChoice::F3 => {
                    RepresentedMatroid::from_row_space(&m.matrix().cast_to_gf::<3>()?).circuits()
                }
            };
            Ok(match common.format {
                Format::Text => circuit_lines(&cs).join("\n") + "\n",
                Format::Json => serde_json::to_string_pretty(&circuits_json(&cs)).unwrap() + "\n",
            })
        }
        Command::Dual { common, field } => {
            let input = read_input(&common.input)?;
            let m = matroid_of(&input);
            // dualize over the requested field; residues print as integers
            let (tag, dual, cs) = match field {
                FieldChoice::Q => {
                    let dual = m.standardize().0.dual()?;
                    let cs = dual.circuits();
                    (FieldTag::Q, dual, cs)
                }
                FieldChoice::F2 => {
                    let f = RepresentedMatroid::from_row_space(&m.matrix().cast_to_gf::<2>()?);
                    let dual = f.standardize().0.dual()?;
                    let cs = dual.circuits();
                    (FieldTag::F2, gf_to_integer_matroid(&dual)?, cs)
                }
                FieldChoice::F3 => {
                    let f = RepresentedMatroid::from_row_space(&m.matrix().cast_to_gf::<3>()?);
                    let dual = f.standardize().0.dual()?;
                    let cs = dual.circuits();
                    (FieldTag::F3, gf_to_integer_matroid(&dual)?, cs)
                }
            };
            match common.format {
                Format::Text => Ok(write_matroid_record(tag, dual.matrix(), Some(&cs))),
                Format::Json => {
                    let rows: Vec<Vec<String>> = dual
                        .matrix()
                        .rows()
                        .map(|r| r.iter().map(|x| x.to_string()).collect())
                        .collect();
                    Ok(serde_json::to_string_pretty(&json!({
                        "ground": dual.matrix().labels(),
                        "field": tag.to_string(),
                        "matrix": rows,
                        "circuits": circuits_json(&cs)["circuits"],
                    }))
                    .unwrap()
                        + "\n")
                }
            }
        }
        Command::Check { common } => {
            let input = read_input(&common.input)?;
            let (tu_matrix, label) = match &input {
                Input::Graph(g) => (g.incidence_matrix(), "incidence matrix"),
                Input::Matrix(m) => (m.clone(), "matrix"),
            };
            let m = matroid_of(&input);
            let tu = is_totally_unimodular(&tu_matrix);
            let regular = m.is_regular_by_binary_test();
            let one_pi = m.is_1pi();
            let loops: Vec<String> = m.loops().iter().map(|&j| m.ground()[j].clone()).collect();
            let coloops: Vec<String> = m.coloops().iter().map(|&j| m.ground()[j].clone()).collect();
            let tu_text = match &tu {
                TuVerdict::TotallyUnimodular => "true".to_string(),
                TuVerdict::BadEntry { row, col, value } => {
                    format!("false (entry {value} at row {row}, column {col})")
                }
                TuVerdict::Violation { rows, cols, det } => {
                    format!("false (rows {rows:?}, columns {cols:?} have determinant {det})")
                }
            };
            let regular_text = match &regular {
                Ok(b) => b.to_string(),
                Err(e) => format!("not applicable ({e})"),
            };
            match common.format {
                Format::Text => Ok(format!(
                    "1PI: {one_pi}\ntotally unimodular ({label}): {tu_text}\nregular (binary test): {regular_text}\nloops: [{}]\ncoloops: [{}]\n",
                    loops.join(", "),
                    coloops.join(", ")
                )),
                Format::Json => Ok(serde_json::to_string_pretty(&json!({
                    "one_pi": one_pi,
                    "totally_unimodular": matches!(tu, TuVerdict::TotallyUnimodular),
                    "tu_detail": tu_text,
                    "regular": regular.ok(),
                    "loops": loops,
                    "coloops": coloops,
                }))
                .unwrap()
                    + "\n"),
            }
        }
        Command::Symanzik {
            common,
            first,
            second,
            dot_basis,
        } => {
            let input = read_input(&common.input)?;
            let want_first = first || !second;
            let mut text_out = String::new();
            let mut json_out = serde_json::Map::new();
            if want_first {
                let m = matroid_of(&input);
                let psi = psi_base_expansion(&m);
                text_out.push_str(&format!("psi = {psi}\n"));
                json_out.insert(
                    "psi".into(),
                    serde_json::to_value(PolyDoc::from_poly(&psi)).unwrap(),
                );
            }
            if second {
                let Input::Graph(g) = &input else {
                    return Err(Error::Domain(
                        "the second Symanzik polynomial needs a graph input with external legs"
                            .into(),
                    ));
                };
                let legs: Vec<String> = g.externals().iter().map(|l| l.symbol.clone()).collect();
                let dots = dot_table(dot_basis, legs)?;
                let phi = phi_second_graph(g, &dots)?;
                text_out.push_str(&format!("phi = {phi}\n"));
                json_out.insert(
                    "phi".into(),
                    serde_json::to_value(PolyDoc::from_poly(&phi)).unwrap(),
                );
            }
            Ok(match common.format {
                Format::Text => text_out,
                Format::Json => {
                    serde_json::to_string_pretty(&serde_json::Value::Object(json_out)).unwrap()
                        + "\n"
                }
            })
        }
        Command::Reduce {
            common,
            pairs,
            flip_sign,
            externals,
        } => {
            let input = read_input(&common.input)?;
            let Input::Graph(g) = &input else {
                return Err(Error::Domain("reduce needs a graph input".into()));
            };
            let pairs = parse_pairs(&pairs)?;
            let mut opts = ReduceOptions {
                include_externals: externals,
                ..Default::default()
            };
            for p in parse_pairs(&flip_sign)? {
                opts.flip_sign.insert(p.key());
            }
            let s = scalarize(g, &pairs, &opts)?;
            let red = &s.reduced;
            let cs = red.circuits();
            match common.format {
                Format::Text => {
                    let mut out = String::new();
                    out.push_str(&format!(
                        "pairs: {}\n",
                        pairs
                            .iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ));
                    out.push_str("discarded:\n");
                    if red.discarded.is_empty() {
                        out.push_str("  (none)\n");
                    }
                    for (p, r) in &red.discarded {
                        let why = match r {
                            Redundancy::SelfPair => "self pair".to_string(),
                            Redundancy::ZeroMomentum => "zero momentum".to_string(),
                            Redundancy::Combination {
                                witness,
                                alpha,
                                beta,
                            } => format!("witness {witness} ({alpha}, {beta})"),
                        };
                        out.push_str(&format!("  {p}: {why}\n"));
                    }
                    out.push_str("new elements:\n");
                    if red.new_elements.is_empty() {
                        out.push_str("  (none)\n");
                    }
                    for el in &red.new_elements {
                        out.push_str(&format!(
                            "  {} = {}  (from {})\n",
                            el.id, el.momentum, el.source
                        ));
                    }
                    out.push_str(&format!(
                        "block form ({} rows, graph rank {}, new {}):\n",
                        red.block.matrix().nrows(),
                        red.block.graph_rank(),
                        red.block.n_new()
                    ));
                    out.push_str(&feynmat::formats::write_matrix_literal(red.block.matrix()));
                    out.push_str("conservation form:\n");
                    out.push_str(&feynmat::formats::write_matrix_literal(&red.conservation));
                    out.push_str("circuits:\n");
                    for line in circuit_lines(&cs) {
                        out.push_str(&format!("  {line}\n"));
                    }
                    out.push_str("scalar terms:\n");
                    for t in &s.terms {
                        out.push_str(&format!("  {}\n", shifts_line(t)));
                    }
                    Ok(out)
                }
                Format::Json => {
                    let discarded: Vec<serde_json::Value> = red
                        .discarded
                        .iter()
                        .map(|(p, r)| {
                            let (kind, witness, alpha, beta) = match r {
                                Redundancy::SelfPair => ("self", None, None, None),
                                Redundancy::ZeroMomentum => ("zero", None, None, None),
                                Redundancy::Combination {
                                    witness,
                                    alpha,
                                    beta,
                                } => (
                                    "combination",
                                    Some(witness.clone()),
                                    Some(alpha.to_string()),
                                    Some(beta.to_string()),
                                ),
                            };
                            json!({
                                "pair": p.to_string(),
                                "kind": kind,
                                "witness": witness,
                                "alpha": alpha,
                                "beta": beta,
                            })
                        })
                        .collect();
                    let new_elements: Vec<serde_json::Value> = red
                        .new_elements
                        .iter()
                        .map(|el| {
                            json!({
                                "id": el.id,
                                "momentum": el.momentum.to_string(),
                                "source": el.source.to_string(),
                                "alpha": el.alpha.to_string(),
                                "beta": el.beta.to_string(),
                            })
                        })
                        .collect();
                    let block_rows: Vec<Vec<String>> = red
                        .block
                        .matrix()
                        .rows()
                        .map(|r| r.iter().map(|x| x.to_string()).collect())
                        .collect();
                    let cons_rows: Vec<Vec<String>> = red
                        .conservation
                        .rows()
                        .map(|r| r.iter().map(|x| x.to_string()).collect())
                        .collect();
                    let circuits: Vec<Vec<String>> = cs
                        .label_sets()
                        .into_iter()
                        .map(|c| c.into_iter().collect())
                        .collect();
                    let terms: Vec<serde_json::Value> = s
                        .terms
                        .iter()
                        .map(|t| {
                            json!({
                                "coefficient": t.coefficient.to_string(),
                                "shifts": t.power_shift,
                                "mass_factor": t.mass_factor.to_string(),
                            })
                        })
                        .collect();
                    Ok(serde_json::to_string_pretty(&json!({
                        "pairs": pairs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "discarded": discarded,
                        "new_elements": new_elements,
                        "block": { "labels": red.block.matrix().labels(), "rows": block_rows,
                                    "graph_rank": red.block.graph_rank(), "n_new": red.block.n_new() },
                        "conservation": { "labels": red.conservation.labels(), "rows": cons_rows },
                        "circuits": circuits,
                        "scalar_terms": terms,
                    }))
                    .unwrap()
                        + "\n")
                }
            }
        }
        Command::Integrand {
            common,
            pairs,
            flip_sign,
            dot_basis,
        } => {
            let input = read_input(&common.input)?;
            let Input::Graph(g) = &input else {
                return Err(Error::Domain("integrand needs a graph input".into()));
            };
            let pairs = parse_pairs(&pairs)?;
            let mut opts = ReduceOptions {
                include_externals: !g.externals().is_empty(),
                ..Default::default()
            };
            for p in parse_pairs(&flip_sign)? {
                opts.flip_sign.insert(p.key());
            }
            let s = scalarize(g, &pairs, &opts)?;
            let red = &s.reduced;
            let leg_symbols: BTreeMap<String, String> = g
                .externals()
                .iter()
                .map(|l| (l.id.clone(), l.symbol.clone()))
                .collect();
            let mass2: BTreeMap<String, String> = g
                .edges()
                .iter()
                .filter_map(|e| e.mass2.clone().map(|m| (e.id.clone(), m)))
                .collect();
            let ms = momentum_space_of_reduced(red, &leg_symbols, &BTreeMap::new(), &mass2)?;
            let matroid = red.conservation_matroid();
            let mut internal = red.internal_labels.clone();
            internal.extend(red.new_element_ids());
            let legs: Vec<(String, usize)> = red
                .external_labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), i))
                .collect();
            let dots = dot_table(
                dot_basis,
                g.externals().iter().map(|l| l.symbol.clone()).collect(),
            )?;
            let par = parametric(&matroid, &internal, &legs, &dots, &BTreeMap::new())?;
            match common.format {
                Format::Text => {
                    let mut out = String::new();
                    out.push_str("momentum space:\n");
                    out.push_str(&format!(
                        "  integration momenta: {}\n",
                        ms.integration_momenta.join(", ")
                    ));
                    for d in &ms.deltas {
                        out.push_str(&format!("  {d}\n"));
                    }
                    for p in &ms.propagators {
                        let mass = p
                            .mass2
                            .as_ref()
                            .map(|m| format!(" + {m}"))
                            .unwrap_or_default();
                        out.push_str(&format!(
                            "  1 / (({})^2{})^({})\n",
                            p.momentum,
                            mass,
                            p.power.render()
                        ));
                    }
                    out.push_str(&format!("  free momenta: {}\n", ms.free_momenta));
                    out.push_str("parametric:\n");
                    out.push_str(&format!("  psi = {}\n", par.psi.text));
                    if let Some(phi) = &par.phi {
                        out.push_str(&format!("  phi = {}\n", phi.text));
                    }
                    let powers: Vec<String> = par
                        .powers
                        .iter()
                        .map(|(e, p)| format!("{e}: {}", p.render()))
                        .collect();
                    out.push_str(&format!("  powers: {}\n", powers.join(", ")));
                    if !pairs.is_empty() {
                        out.push_str("scalar terms:\n");
                        for t in &s.terms {
                            out.push_str(&format!("  {}\n", shifts_line(t)));
                        }
                    }
                    Ok(out)
                }
                Format::Json => Ok(serde_json::to_string_pretty(&json!({
                    "momentum_space": serde_json::to_value(&ms).unwrap(),
                    "parametric": serde_json::to_value(&par).unwrap(),
                }))
                .unwrap()
                    + "\n"),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
