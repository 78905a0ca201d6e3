//! `modalkit` command-line front end.
//!
//! Exit codes: 0 success, 1 logical failure (proof rejected, formula not
//! valid, countermodel found, suite violation), 2 usage or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modalkit::decision::{
    bounded_countermodel, decide_valid, enumerate_mcs, extend_mcs, finite_closure, FiniteMcs, Logic, SearchResult,
    Validity,
};
use modalkit::hilbert::{
    parse_certificate, print_certificate, prove_imply_conjunct_equiv, prove_k_conj_imply_factor, prove_k_imp,
    prove_k_over_conjunct, prove_k_thm, CertSystem, Certificate, CheckError, Direction, Proof, System,
};
use modalkit::kripke::{
    class_check, eval, frame_in_class, parse_model, parse_pointed_model, print_pointed_model, FrameClass, Model,
};
use modalkit::suite::CRITERIA;
use modalkit::topospace::{parse_topo_model, topo_eval};
use modalkit::toposys::{s4_to_topo, topo_to_s4};
use modalkit::{parse, render, Agent, Formula};

#[derive(Parser)]
#[command(name = "modalkit", version, about = "Epistemic logic toolkit: models, proofs, tableaux, countermodel search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Restricts the formula language; violations are usage errors.
#[derive(Args, Clone, Default)]
struct Signature {
    /// Maximum number of distinct agents a formula may mention.
    #[arg(long, value_name = "N")]
    agents: Option<usize>,
    /// Comma-separated list of the allowed propositional variables.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical rendering.
    Parse {
        formula: String,
        #[command(flatten)]
        sig: Signature,
    },
    /// Evaluate a formula on a Kripke model file (or a topological one with --topo).
    Eval {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Read the model file as a finite topological space.
        #[arg(long)]
        topo: bool,
        /// World to evaluate at; defaults to the file's `world` line, else all worlds.
        #[arg(long, value_name = "N")]
        world: Option<usize>,
        formula: String,
        #[command(flatten)]
        sig: Signature,
    },
    /// Report the frame properties of each agent of a model file.
    Classify {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
    /// Decide validity in K or S4 by tableau.
    Decide {
        #[arg(long, value_name = "LOGIC")]
        logic: String,
        formula: String,
        #[command(flatten)]
        sig: Signature,
    },
    /// Exhaustively search a frame class for a countermodel.
    Search {
        /// Frame class; alternatively derived from --logic.
        #[arg(long, value_name = "CLASS")]
        class: Option<String>,
        #[arg(long, value_name = "LOGIC", conflicts_with = "class")]
        logic: Option<String>,
        #[arg(long, value_name = "N", default_value_t = 4)]
        bound: usize,
        formula: String,
        #[command(flatten)]
        sig: Signature,
    },
    /// Check a proof certificate.
    Check {
        #[arg(long, value_name = "FILE")]
        proof: PathBuf,
        /// Require the certificate to be for this system.
        #[arg(long, value_name = "LOGIC")]
        logic: Option<String>,
    },
    /// Build a derived-rule proof and print its certificate.
    Derive {
        builder: Builder,
        /// Formula arguments; see the builder for their roles.
        #[arg(required = true)]
        formulas: Vec<String>,
        #[arg(long, value_name = "LOGIC", default_value = "K")]
        logic: String,
        #[arg(long, value_name = "N", default_value_t = 1)]
        agent: u32,
        /// Build the converse direction (k-over-conjunct, imply-conjunct).
        #[arg(long)]
        converse: bool,
        /// Source certificate for imply-conjunct.
        #[arg(long, value_name = "FILE")]
        proof: Option<PathBuf>,
        #[command(flatten)]
        sig: Signature,
    },
    /// Translate an S4 certificate to TOPOS4 or back.
    Translate {
        #[arg(long, value_name = "FILE")]
        proof: PathBuf,
    },
    /// Enumerate maximal consistent sets over the closure of the given formulas.
    Mcs {
        #[arg(long, value_name = "LOGIC", default_value = "S4")]
        logic: String,
        /// Extend this seed to one MCS instead of listing all of them.
        #[arg(long, value_name = "FORMULA")]
        extend: Vec<String>,
        #[arg(required = true)]
        formulas: Vec<String>,
        #[command(flatten)]
        sig: Signature,
    },
    /// Run acceptance suites by name, or `all`.
    Suite {
        name: String,
        #[arg(long, value_name = "N", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    /// K_i(φ → ψ) → (K_i φ → K_i ψ). Formulas: φ ψ.
    KImp,
    /// (K_i φ ∧ L_i ψ) → L_i(φ ∧ ψ). Formulas: φ ψ.
    KThm,
    /// ((K_i φ ∧ K_i ψ) → θ) → (K_i(φ ∧ ψ) → θ). Formulas: φ ψ θ.
    Factor,
    /// K_i over a conjunction list. Formulas: ψ1 … ψn.
    KOverConjunct,
    /// Curried to conjunctive deduction. Formulas: ψ1 … ψn φ; needs --proof.
    ImplyConjunct,
}

/// Input or usage problem; exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Outcome = Result<bool, Usage>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))
}

fn formula(text: &str, sig: &Signature) -> Result<Formula, Usage> {
    let f = parse(text).map_err(|e| Usage(format!("formula `{text}`: {e}")))?;
    if let Some(n) = sig.agents {
        let used = f.agents().len();
        if used > n {
            return Err(Usage(format!("formula `{text}` mentions {used} agents, --agents allows {n}")));
        }
    }
    if let Some(allowed) = &sig.vars {
        if let Some(v) = f.vars().iter().find(|v| !allowed.iter().any(|a| a.as_str() == &***v)) {
            return Err(Usage(format!("formula `{text}` uses variable `{v}` outside --vars")));
        }
    }
    Ok(f)
}

fn logic(name: &str) -> Result<Logic, Usage> {
    name.parse::<Logic>().map_err(Usage)
}

fn class_for(logic: &str) -> Result<FrameClass, Usage> {
    Ok(match logic {
        "K" => FrameClass::All,
        "K2" => FrameClass::WeaklyDirected,
        "S4" | "TOPOS4" => FrameClass::Preorder,
        "S42" => FrameClass::WeaklyDirectedPreorder,
        _ => return Err(Usage(format!("unknown logic `{logic}` (expected K, S4, S42, K2 or TOPOS4)"))),
    })
}

fn rejected(out: &mut impl Write, e: &CheckError) -> Outcome {
    writeln!(out, "ERROR line {}: {}", e.line, e.reason)?;
    Ok(false)
}

fn run(cmd: Command, out: &mut impl Write) -> Outcome {
    match cmd {
        Command::Parse { formula: text, sig } => {
            writeln!(out, "{}", render(&formula(&text, &sig)?))?;
            Ok(true)
        }
        Command::Eval {
            model,
            topo,
            world,
            formula: text,
            sig,
        } => {
            let f = formula(&text, &sig)?;
            let src = read(&model)?;
            if topo {
                let t = parse_topo_model(&src)?;
                return report_truth(out, t.points, world, |w| topo_eval(&t, w, &f));
            }
            let m = parse_model(&src)?;
            let point = world.or(parse_pointed_model(&src).ok().map(|pm| pm.world));
            report_truth(out, m.frame.worlds, point, |w| eval(&m, w, &f))
        }
        Command::Classify { model } => {
            let m: Model = parse_model(&read(&model)?)?;
            let fr = &m.frame;
            writeln!(out, "worlds {}", fr.worlds)?;
            for i in fr.agents().collect::<Vec<_>>() {
                let props: Vec<&str> = [FrameClass::Reflexive, FrameClass::Transitive, FrameClass::WeaklyDirected]
                    .into_iter()
                    .filter(|&c| class_check(fr, i, c))
                    .map(FrameClass::name)
                    .collect();
                let props = if props.is_empty() { "none".to_string() } else { props.join(" ") };
                writeln!(out, "agent {i}: {props}")?;
            }
            let classes: Vec<&str> = FrameClass::ALL
                .into_iter()
                .filter(|&c| frame_in_class(fr, c))
                .map(FrameClass::name)
                .collect();
            writeln!(out, "classes: {}", classes.join(" "))?;
            Ok(true)
        }
        Command::Decide {
            logic: name,
            formula: text,
            sig,
        } => {
            let l = logic(&name)?;
            match decide_valid(l, &formula(&text, &sig)?)? {
                Validity::Valid => {
                    writeln!(out, "VALID")?;
                    Ok(true)
                }
                Validity::Countermodel(pm) => {
                    writeln!(out, "COUNTERMODEL")?;
                    write!(out, "{}", print_pointed_model(&pm))?;
                    Ok(false)
                }
            }
        }
        Command::Search {
            class,
            logic,
            bound,
            formula: text,
            sig,
        } => {
            let cls = match (class, logic) {
                (Some(c), _) => c.parse::<FrameClass>().map_err(Usage)?,
                (None, Some(l)) => class_for(&l)?,
                (None, None) => return Err(Usage("search needs --class or --logic".into())),
            };
            match bounded_countermodel(cls, &formula(&text, &sig)?, bound)? {
                SearchResult::NoneUpTo(n) => {
                    writeln!(out, "NONE-UP-TO {n}")?;
                    Ok(true)
                }
                SearchResult::Countermodel(pm) => {
                    writeln!(out, "COUNTERMODEL")?;
                    write!(out, "{}", print_pointed_model(&pm))?;
                    Ok(false)
                }
            }
        }
        Command::Check { proof, logic } => {
            let cert = match parse_certificate(&read(&proof)?) {
                Ok(c) => c,
                Err(e) => {
                    writeln!(out, "ERROR line {}: {}", e.line, e.message)?;
                    return Ok(false);
                }
            };
            if let Some(want) = logic {
                let want: CertSystem = want.parse().map_err(Usage)?;
                if want != cert.system {
                    writeln!(out, "ERROR line 1: certificate is for {}, not {want}", cert.system)?;
                    return Ok(false);
                }
            }
            match cert.check() {
                Ok(f) => {
                    writeln!(out, "OK {}", render(&f))?;
                    Ok(true)
                }
                Err(e) => rejected(out, &e),
            }
        }
        Command::Derive {
            builder,
            formulas,
            logic: name,
            agent,
            converse,
            proof,
            sig,
        } => {
            let sys: System = name.parse().map_err(Usage)?;
            let fs = formulas.iter().map(|t| formula(t, &sig)).collect::<Result<Vec<_>, _>>()?;
            let i = Agent(agent);
            let arity = |n: usize| {
                if fs.len() == n {
                    Ok(())
                } else {
                    Err(Usage(format!("this builder takes {n} formulas, got {}", fs.len())))
                }
            };
            let pr: Proof = match builder {
                Builder::KImp => {
                    arity(2)?;
                    prove_k_imp(&sys, i, &fs[0], &fs[1])?
                }
                Builder::KThm => {
                    arity(2)?;
                    prove_k_thm(&sys, i, &fs[0], &fs[1])?
                }
                Builder::Factor => {
                    arity(3)?;
                    prove_k_conj_imply_factor(&sys, i, &fs[0], &fs[1], &fs[2])?
                }
                Builder::KOverConjunct => {
                    let (fwd, bwd) = prove_k_over_conjunct(&sys, i, &fs)?;
                    if converse {
                        bwd
                    } else {
                        fwd
                    }
                }
                Builder::ImplyConjunct => {
                    let path = proof.ok_or_else(|| Usage("imply-conjunct needs --proof".into()))?;
                    let src = parse_certificate(&read(&path)?)?;
                    let (phi, psis) = fs.split_last().expect("at least one formula");
                    let dir = if converse {
                        Direction::ConjunctToImply
                    } else {
                        Direction::ImplyToConjunct
                    };
                    match prove_imply_conjunct_equiv(&sys, psis, phi, dir, &src.proof) {
                        Ok(pr) => pr,
                        Err(e) => {
                            writeln!(out, "ERROR: {e}")?;
                            return Ok(false);
                        }
                    }
                }
            };
            let cert = Certificate {
                system: CertSystem::Normal(sys),
                proof: pr,
            };
            write!(out, "{}", print_certificate(&cert))?;
            Ok(true)
        }
        Command::Translate { proof } => {
            let cert = parse_certificate(&read(&proof)?)?;
            let translated = match &cert.system {
                CertSystem::Normal(s) if *s == System::s4() => s4_to_topo(&cert.proof).map(|p| (CertSystem::Topo, p)),
                CertSystem::Topo => topo_to_s4(&cert.proof).map(|p| (CertSystem::Normal(System::s4()), p)),
                other => return Err(Usage(format!("translate needs an S4 or TOPOS4 certificate, found {other}"))),
            };
            match translated {
                Ok((system, proof)) => {
                    write!(out, "{}", print_certificate(&Certificate { system, proof }))?;
                    Ok(true)
                }
                Err(e) => rejected(out, &e),
            }
        }
        Command::Mcs {
            logic: name,
            extend,
            formulas,
            sig,
        } => {
            let l = logic(&name)?;
            let fs = formulas.iter().map(|t| formula(t, &sig)).collect::<Result<Vec<_>, _>>()?;
            let closure = finite_closure(&fs);
            let shown: Vec<String> = closure.iter().map(render).collect();
            writeln!(out, "closure {}: {}", closure.len(), shown.join(" ; "))?;
            if extend.is_empty() {
                let all = enumerate_mcs(l, &closure)?;
                for (k, m) in all.iter().enumerate() {
                    writeln!(out, "mcs {}: {}", k + 1, members(m))?;
                }
                writeln!(out, "total {}", all.len())?;
                return Ok(true);
            }
            let seed = extend.iter().map(|t| formula(t, &sig)).collect::<Result<Vec<_>, _>>()?;
            match extend_mcs(l, &seed, &closure) {
                Ok(m) => {
                    writeln!(out, "mcs: {}", members(&m))?;
                    Ok(true)
                }
                Err(e @ modalkit::decision::McsError::InconsistentSeed) => {
                    writeln!(out, "ERROR: {e}")?;
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Suite { name, seed } => {
            let selected: Vec<_> = CRITERIA
                .iter()
                .filter(|(id, n, _)| name == "all" || *n == name || id.to_string() == name)
                .collect();
            if selected.is_empty() {
                let names: Vec<&str> = CRITERIA.iter().map(|c| c.1).collect();
                return Err(Usage(format!("unknown suite `{name}` (expected all, {})", names.join(", "))));
            }
            let mut ok = true;
            for (_, _, check) in selected {
                let report = check(seed);
                writeln!(out, "{report}")?;
                ok &= report.passed;
            }
            Ok(ok)
        }
    }
}

fn members(m: &FiniteMcs) -> String {
    let items: Vec<String> = m.members.iter().map(render).collect();
    format!("{{ {} }}", items.join(" ; "))
}

fn report_truth<E: std::fmt::Display>(
    out: &mut impl Write,
    worlds: usize,
    point: Option<usize>,
    truth: impl Fn(usize) -> Result<bool, E>,
) -> Outcome {
    let word = |b: bool| if b { "TRUE" } else { "FALSE" };
    match point {
        Some(w) => writeln!(out, "{}", word(truth(w)?))?,
        None => {
            for w in 0..worlds {
                writeln!(out, "world {w}: {}", word(truth(w)?))?;
            }
        }
    }
    Ok(true)
}
