//! Command-line surface for the exact Higman-Thompson computations: every
//! value type round-trips through the canonical text formats, and every
//! construction is runnable as a replayable command line.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vnr::constructions::{
    abelianize, attracting_all, attracting_element, conjugate, conjugator, hnn_data,
    hnn_decompose, in_commutator, order_two_element, same_type_homeo, verify_hnn_criterion,
    HnnData,
};
use vnr::element::random_element;
use vnr::text::{parse_clopen, parse_element, parse_point, parse_set, ElementRepr};
use vnr::{Element, Error, Space};

#[derive(Parser)]
#[command(name = "vnr", about = "Exact computation in Higman-Thompson groups", version)]
struct Cli {
    /// Emit results (and errors) as JSON instead of the text formats.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpaceArg {
    /// Space parameters as `n,r`.
    #[arg(long, value_parser = parse_space)]
    space: Space,
}

fn parse_space(text: &str) -> Result<Space, String> {
    let (n, r) = text
        .split_once(',')
        .ok_or_else(|| "expected `n,r`".to_string())?;
    let n: u32 = n.trim().parse().map_err(|_| "n must be an integer".to_string())?;
    let r: u32 = r.trim().parse().map_err(|_| "r must be an integer".to_string())?;
    Space::new(n, r).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Parse an element and print its canonical form.
    Canon {
        /// Input file; `-` or absent reads stdin.
        input: Option<String>,
    },
    /// Multiply two elements (the right factor acts first).
    Mul { left: String, right: String },
    /// Invert an element.
    Inv { input: Option<String> },
    /// Apply an element to a rational point.
    Eval {
        input: String,
        /// Point in `root:pre(per)` syntax.
        point: String,
    },
    /// Germ exponent of an element at a fixed rational point.
    Germ { input: String, point: String },
    /// Abelianization image of an element of Fix(S).
    Abel {
        input: String,
        /// Point set in `{point, point}` syntax.
        #[arg(long)]
        set: String,
    },
    /// Build HNN data for Fix(S) at a point and print its JSON bundle.
    HnnBuild {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        set: String,
        #[arg(long)]
        point: String,
        /// Target Higman-Thompson index (>= 1).
        #[arg(long)]
        q: u32,
    },
    /// Decompose g as f^(i+j) h f^(-j) against stored HNN data.
    HnnDecompose {
        /// HNN data bundle (JSON file).
        #[arg(long)]
        data: String,
        input: String,
    },
    /// Conjugate an element of Fix(S) to Fix(S') across spaces.
    Conjugate {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        source: String,
        /// Target space as `n,r` (defaults to --space).
        #[arg(long, value_parser = parse_space)]
        target_space: Option<Space>,
        #[arg(long)]
        target: String,
        /// Matching as comma-separated target indices, e.g. `1,0`.
        #[arg(long)]
        phi: Option<String>,
        /// Layer cap guarding the conjugation depth search.
        #[arg(long)]
        depth: Option<usize>,
        input: String,
    },
    /// Test membership in the commutator subgroup of Fix(S).
    CommutatorTest {
        input: String,
        #[arg(long)]
        set: String,
    },
    /// Attracting element for a point of S (or for all of S).
    Attract {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        set: String,
        /// Distinguished point; absent means attract at every point.
        #[arg(long)]
        point: Option<String>,
    },
    /// An involution in Fix_0(S).
    OrderTwo {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        set: String,
    },
    /// Thompson-like homeomorphism between two same-type clopen sets.
    SameType {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        left: String,
        /// Space of the right set (defaults to --space).
        #[arg(long, value_parser = parse_space)]
        target_space: Option<Space>,
        #[arg(long)]
        right: String,
    },
    /// Seed-deterministic random element.
    Random {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Run the HNN criterion checks against stored data.
    Verify {
        #[arg(long)]
        data: String,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: Option<&str>) -> Result<String, Error> {
    match path {
        Some(p) if p != "-" => fs::read_to_string(p).map_err(|e| Error::Parse {
            line: 0,
            column: 0,
            message: format!("cannot read {p}: {e}"),
        }),
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse {
                    line: 0,
                    column: 0,
                    message: format!("cannot read stdin: {e}"),
                })?;
            Ok(buf)
        }
    }
}

fn read_element(path: &str) -> Result<Element, Error> {
    parse_element(&read_input(Some(path))?)
}

fn print_element(g: &Element, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string(&ElementRepr::from(g)).expect("serializable")
        );
    } else {
        println!("{g}");
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let json = cli.json;
    match cli.command {
        Command::Canon { input } => {
            let g = parse_element(&read_input(input.as_deref())?)?;
            print_element(&g, json);
        }
        Command::Mul { left, right } => {
            let a = read_element(&left)?;
            let b = read_element(&right)?;
            print_element(&a.compose(&b)?, json);
        }
        Command::Inv { input } => {
            let g = parse_element(&read_input(input.as_deref())?)?;
            print_element(&g.invert(), json);
        }
        Command::Eval { input, point } => {
            let g = read_element(&input)?;
            let p = parse_point(g.space(), &point)?;
            let image = g.evaluate(&p)?;
            if json {
                println!("{}", serde_json::json!({ "point": image.to_string() }));
            } else {
                println!("{image}");
            }
        }
        Command::Germ { input, point } => {
            let g = read_element(&input)?;
            let p = parse_point(g.space(), &point)?;
            let e = vnr::germ_exponent(&g, &p)?;
            if json {
                println!("{}", serde_json::json!({ "exponent": e.value() }));
            } else {
                println!("{e}");
            }
        }
        Command::Abel { input, set } => {
            let g = read_element(&input)?;
            let s = parse_set(g.space(), &set)?;
            let image = abelianize(&s, &g)?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "germs": image.germ_part,
                        "parity": image.parity_part.value(),
                    })
                );
            } else {
                let germs: Vec<String> = image.germ_part.iter().map(|k| k.to_string()).collect();
                println!("germs: [{}] parity: {}", germs.join(", "), image.parity_part);
            }
        }
        Command::HnnBuild {
            space,
            set,
            point,
            q,
        } => {
            let s = parse_set(space.space, &set)?;
            let p = parse_point(space.space, &point)?;
            let data = hnn_data(&s, &p, q)?;
            println!("{}", data.to_json());
        }
        Command::HnnDecompose { data, input } => {
            let bundle = HnnData::from_json(&read_input(Some(&data))?)?;
            let g = read_element(&input)?;
            let (i, j, h) = hnn_decompose(&bundle, &g)?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "i": i, "j": j, "h": ElementRepr::from(&h) })
                );
            } else {
                println!("i: {i}");
                println!("j: {j}");
                println!("{h}");
            }
        }
        Command::Conjugate {
            space,
            source,
            target_space,
            target,
            phi,
            depth,
            input,
        } => {
            let src = parse_set(space.space, &source)?;
            let tgt = parse_set(target_space.unwrap_or(space.space), &target)?;
            let matching: Vec<usize> = match phi {
                Some(text) => text
                    .split(',')
                    .map(|part| {
                        part.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::InvalidBijection)
                    })
                    .collect::<Result<_, _>>()?,
                None => (0..src.len()).collect(),
            };
            let mut data = conjugator(&src, &tgt, &matching)?;
            if let Some(cap) = depth {
                data = data.with_layer_cap(cap);
            }
            let g = read_element(&input)?;
            print_element(&conjugate(&data, &g)?, json);
        }
        Command::CommutatorTest { input, set } => {
            let g = read_element(&input)?;
            let s = parse_set(g.space(), &set)?;
            let verdict = in_commutator(&s, &g);
            if json {
                println!("{}", serde_json::json!({ "in_commutator": verdict }));
            } else {
                println!("{verdict}");
            }
        }
        Command::Attract { space, set, point } => {
            let s = parse_set(space.space, &set)?;
            let g = match point {
                Some(text) => attracting_element(&s, &parse_point(space.space, &text)?)?,
                None => attracting_all(&s)?,
            };
            print_element(&g, json);
        }
        Command::OrderTwo { space, set } => {
            let s = parse_set(space.space, &set)?;
            print_element(&order_two_element(&s)?, json);
        }
        Command::SameType {
            space,
            left,
            target_space,
            right,
        } => {
            let l = parse_clopen(space.space, &left)?;
            let r = parse_clopen(target_space.unwrap_or(space.space), &right)?;
            let pm = same_type_homeo(&l, &r)?;
            if json {
                let pairs: Vec<(String, String)> = pm
                    .table()
                    .iter()
                    .map(|(d, rr)| (d.to_string(), rr.to_string()))
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "n": pm.dom_space().n(),
                        "q": pm.dom_space().r(),
                        "r": pm.ran_space().r(),
                        "pairs": pairs,
                    })
                );
            } else {
                println!("{pm}");
            }
        }
        Command::Random { space, seed, depth } => {
            print_element(&random_element(space.space, depth, seed), json);
        }
        Command::Verify {
            data,
            samples,
            seed,
        } => {
            let bundle = HnnData::from_json(&read_input(Some(&data))?)?;
            let report = verify_hnn_criterion(&bundle, samples, seed);
            if json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                print!("{report}");
            }
            if !report.all_passed() {
                return Err(Error::InvalidData {
                    message: "HNN criterion checks failed".to_string(),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if json {
                eprintln!("{}", serde_json::json!({ "error": err.to_string() }));
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
