//! `fbm`: exact verification tables for the fake baby monster algebra.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fbm_core::characters;
use fbm_core::codes::{BitWord, NamedCode};
use fbm_core::gkm::{self, RootSystem, RootVector};
use fbm_core::lattices::cache::EnumerationCache;
use fbm_core::lattices::linalg::ratio;
use fbm_core::lattices::{self, Lattice};
use fbm_core::qseries::{self, FracExp, QSeries};
use fbm_core::Error;

const QSERIES_CAP: i64 = 200;
const DIM_CAP: i64 = 6;
const CACHE_ENV: &str = "FBM_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "fbm", version, about = "Exact tables and verifications for the fake baby monster Lie algebra")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Enumeration cache directory (overrides FBM_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Binary codes: weight enumerators, coset tables, Steiner systems.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// q-series expansions and the modular identities.
    Qseries(QseriesArgs),
    /// The character of V.
    #[command(subcommand)]
    Char(CharCmd),
    /// Roots, multiplicities and the denominator identity.
    #[command(subcommand)]
    Gkm(GkmCmd),
    /// Lattice invariants.
    #[command(subcommand)]
    Lattice(LatticeCmd),
}

#[derive(Subcommand, Debug)]
enum CodesCmd {
    /// Weight enumerator of a code or one of its cosets.
    Enumerator {
        #[arg(long)]
        code: String,
        /// Coset offset as a bit string, e.g. 0000000000000011.
        #[arg(long)]
        coset: Option<String>,
    },
    /// Checks that the minimum weight words form a Steiner system S(3,4,n).
    Steiner {
        #[arg(long)]
        code: String,
    },
    /// Coset leaders of a code with their enumerators.
    Cosets {
        #[arg(long)]
        code: String,
    },
}

#[derive(Args, Debug)]
struct QseriesArgs {
    #[arg(value_enum)]
    series: SeriesName,
    /// Terms are printed for exponents below this order.
    #[arg(long)]
    order: i64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SeriesName {
    C0,
    C1,
    C2,
    /// The three string functions c0, c1, c2.
    String,
    H,
    G0,
    G1,
    J,
    /// Checks the four identities between h, g0, g1 and the string functions.
    VerifyLemma,
}

#[derive(Subcommand, Debug)]
enum CharCmd {
    /// Graded dimensions at z = 0 against J + 48.
    Dim {
        #[arg(long)]
        order: i64,
    },
    /// Compares the code form with the lattice form key by key.
    Verify {
        #[arg(long)]
        order: i64,
    },
    /// Dumps the weighted character in one form.
    Dump {
        #[arg(long, allow_hyphen_values = true)]
        order: i64,
        #[arg(long, value_enum, default_value = "code")]
        form: Form,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Form {
    Code,
    Lattice,
}

#[derive(Subcommand, Debug)]
enum GkmCmd {
    /// Multiplicity of a vector z1..z16,m2,n2 (doubled coordinates) or 0,m2,n2.
    Mult {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Real simple roots up to a height such as 1 or 3/2.
    SimpleRoots {
        #[arg(long)]
        height: String,
    },
    /// Reduces a vector into the fundamental chamber.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Give up after this many reflections.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Multiplicities of the imaginary simple roots nρ.
    Imaginary {
        #[arg(long, default_value_t = 8)]
        n: i64,
    },
    /// Product side against sum side of the specialized denominator identity.
    VerifyDenominator {
        #[arg(long)]
        bound: i64,
    },
    /// Checks mult(α) = c(−α²) + [α∈L] c(−α²/2) for roots up to a t-height.
    Consistency {
        #[arg(long)]
        bound: i64,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Genus invariants of N ⊕ II(1,1) and Λ16 ⊕ II(1,1)(2).
    Genus,
    /// Vector counts by norm.
    Theta {
        #[arg(long, value_enum)]
        lattice: LatticeName,
        #[arg(long)]
        max_norm: i64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LatticeName {
    N,
    Bw,
    BwDual,
}

struct Report {
    text: String,
    json: Value,
    verified: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, verified: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable"));
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(if r.verified { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": exit_code(&e).to_string() }));
            }
            eprintln!("fbm: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::Consistency(_) => 1,
        Error::NonTermination { .. } => 4,
        Error::Resource(_) | Error::Overflow(_) | Error::Io(_) => 3,
    }
}

fn run(cli: &Cli) -> fbm_core::Result<Report> {
    let cache = match cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)) {
        Some(dir) => Some(EnumerationCache::new(dir)?),
        None => None,
    };
    match &cli.command {
        Command::Codes(c) => codes(c),
        Command::Qseries(a) => qseries_cmd(a),
        Command::Char(c) => chars(c),
        Command::Gkm(c) => gkm_cmd(c, cache.as_ref()),
        Command::Lattice(c) => lattice(c),
    }
}

fn usage<T>(msg: impl Into<String>) -> fbm_core::Result<T> {
    Err(Error::Input(msg.into()))
}

fn strs<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn counts_json(pairs: &[(usize, u64)]) -> Value {
    pairs.iter().map(|(w, c)| json!({ "weight": w.to_string(), "count": c.to_string() })).collect()
}

fn codes(cmd: &CodesCmd) -> fbm_core::Result<Report> {
    match cmd {
        CodesCmd::Enumerator { code, coset } => {
            let named = NamedCode::parse(code)?;
            let (c, offset) = named.code_and_offset();
            let rep = match coset {
                Some(bits) => {
                    let w: BitWord = bits.parse()?;
                    if w.len() != c.length() {
                        return usage(format!("coset has length {}, code has length {}", w.len(), c.length()));
                    }
                    w.add(&offset)
                }
                None => offset,
            };
            let e = c.coset_weight_enumerator(&rep)?;
            let leader = c.coset_leader(&rep);
            Ok(Report::ok(
                e.to_table(),
                json!({
                    "command": "codes enumerator",
                    "code": code,
                    "coset_leader": leader.to_string(),
                    "counts": counts_json(&e.support()),
                    "polynomial": e.to_polynomial(),
                }),
            ))
        }
        CodesCmd::Steiner { code } => {
            let (c, _) = NamedCode::parse(code)?.code_and_offset();
            let r = c.steiner_property(4, 3)?;
            let status = if r.holds { "OK" } else { "FAILED" };
            let text = format!("S({},{},{}): {status} ({} triples)", r.t, r.block_weight, r.length, r.counts.len());
            Ok(Report {
                text,
                json: json!({
                    "command": "codes steiner",
                    "code": code,
                    "holds": r.holds,
                    "blocks": r.blocks.to_string(),
                    "triples": r.counts.len().to_string(),
                }),
                verified: r.holds,
            })
        }
        CodesCmd::Cosets { code } => {
            let (c, _) = NamedCode::parse(code)?.code_and_offset();
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for rep in c.coset_representatives()? {
                let e = c.coset_weight_enumerator(&rep)?;
                lines.push(format!("{rep}\t{}", e.to_table()));
                rows.push(json!({ "leader": rep.to_string(), "counts": counts_json(&e.support()) }));
            }
            Ok(Report::ok(lines.join("\n"), json!({ "command": "codes cosets", "code": code, "cosets": rows })))
        }
    }
}

fn series_json(s: &QSeries) -> Value {
    s.terms().iter().map(|(e, c)| json!({ "exponent": e.to_string(), "coefficient": c.to_string() })).collect()
}

fn qseries_cmd(a: &QseriesArgs) -> fbm_core::Result<Report> {
    if a.order < 1 {
        return usage(format!("order must be positive, got {}", a.order));
    }
    if a.order > QSERIES_CAP {
        return Err(Error::Resource(format!("order {} exceeds the cap {QSERIES_CAP}", a.order)));
    }
    let order = FracExp::integer(a.order);
    let named: Vec<(&str, QSeries)> = match a.series {
        SeriesName::VerifyLemma => {
            let checks = qseries::modular_identities(order)?;
            let failed: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name).collect();
            let text = if failed.is_empty() {
                format!("{} identities OK", checks.len())
            } else {
                format!("{} of {} identities FAILED: {}", failed.len(), checks.len(), failed.join("; "))
            };
            let rows: Vec<Value> = checks.iter().map(|c| json!({ "name": c.name, "holds": c.holds })).collect();
            return Ok(Report {
                text,
                json: json!({ "command": "qseries verify-lemma", "order": a.order.to_string(), "identities": rows }),
                verified: failed.is_empty(),
            });
        }
        SeriesName::C0 | SeriesName::C1 | SeriesName::C2 | SeriesName::String => {
            let s = qseries::string_functions(order)?;
            match a.series {
                SeriesName::C0 => vec![("c0", s.c0)],
                SeriesName::C1 => vec![("c1", s.c1)],
                SeriesName::C2 => vec![("c2", s.c2)],
                _ => vec![("c0", s.c0), ("c1", s.c1), ("c2", s.c2)],
            }
        }
        SeriesName::H => vec![("h", qseries::h_function(order)?)],
        SeriesName::G0 => vec![("g0", qseries::weight_minus8_functions(order)?.g0)],
        SeriesName::G1 => vec![("g1", qseries::weight_minus8_functions(order)?.g1)],
        SeriesName::J => vec![("J", qseries::jay_function(order)?)],
    };
    let text = if named.len() == 1 {
        named[0].1.to_text().trim_end().to_string()
    } else {
        named.iter().map(|(n, s)| format!("# {n}\n{}", s.to_text())).collect::<String>().trim_end().to_string()
    };
    let series: serde_json::Map<String, Value> = named.iter().map(|(n, s)| (n.to_string(), series_json(s))).collect();
    Ok(Report::ok(text, json!({ "command": "qseries", "order": a.order.to_string(), "series": series })))
}

fn chars(cmd: &CharCmd) -> fbm_core::Result<Report> {
    match cmd {
        CharCmd::Dim { order } => {
            if *order < 0 {
                return usage("order must be nonnegative");
            }
            if *order > DIM_CAP {
                return Err(Error::Resource(format!("order {order} exceeds the cap {DIM_CAP}")));
            }
            let dims = characters::dimension_list(&characters::graded_dimension_code_form(*order)?, *order)?;
            let oracle = characters::dimension_list(&characters::j_plus_48(*order)?, *order)?;
            let ok = dims == oracle;
            let terms: Vec<String> = dims.iter().enumerate().map(|(i, d)| format!("q^{}:{d}", i as i64 - 1)).collect();
            let text = format!("{} (J+48: {})", terms.join(" "), if ok { "OK" } else { "FAILED" });
            Ok(Report {
                text,
                json: json!({
                    "command": "char dim",
                    "order": order.to_string(),
                    "dimensions": strs(&dims),
                    "j_plus_48": strs(&oracle),
                    "matches": ok,
                }),
                verified: ok,
            })
        }
        CharCmd::Verify { order } => {
            if *order < -1 {
                return usage("order must be at least -1");
            }
            let r = characters::compare_forms(*order)?;
            let text = if r.equal() {
                format!("EQUAL through q^{} ({} keys compared)", r.through, r.keys_compared)
            } else {
                format!(
                    "DIFFERENT through q^{}: {} of {} keys differ{}",
                    r.through,
                    r.mismatched_keys,
                    r.keys_compared,
                    r.first_mismatch.as_deref().map(|m| format!(" (first: {m})")).unwrap_or_default()
                )
            };
            Ok(Report {
                text,
                json: json!({
                    "command": "char verify",
                    "order": order.to_string(),
                    "equal": r.equal(),
                    "classes": r.classes.to_string(),
                    "keys_compared": r.keys_compared.to_string(),
                    "mismatched_keys": r.mismatched_keys.to_string(),
                    "first_mismatch": r.first_mismatch,
                    "dimensions": strs(&r.dimensions),
                }),
                verified: r.equal(),
            })
        }
        CharCmd::Dump { order, form } => {
            let s = match form {
                Form::Code => characters::chi_v_code_form(*order)?,
                Form::Lattice => characters::chi_v_lattice_form(*order)?,
            };
            let terms: Vec<Value> = s
                .terms()
                .iter()
                .map(|((e, k), c)| json!({ "exponent": e.to_string(), "weight": strs(k.iter()), "coefficient": c.to_string() }))
                .collect();
            Ok(Report::ok(
                s.to_text().trim_end().to_string(),
                json!({ "command": "char dump", "order": order.to_string(), "terms": terms }),
            ))
        }
    }
}

/// Enough of `g0`, `g1` for every root of t-height at most `bound`.
fn system_for_bound(bound: i64) -> fbm_core::Result<RootSystem> {
    RootSystem::new((bound * bound / 64 + 2).max(6))
}

fn gkm_cmd(cmd: &GkmCmd, cache: Option<&EnumerationCache>) -> fbm_core::Result<Report> {
    match cmd {
        GkmCmd::Mult { vector } => {
            let v = RootVector::parse(vector)?;
            let rs = RootSystem::for_vector(&v)?;
            let m = rs.root_multiplicity(&v)?;
            Ok(Report::ok(
                m.to_string(),
                json!({
                    "command": "gkm mult",
                    "vector": v.to_string(),
                    "norm": v.norm().to_string(),
                    "in_l": rs.in_l(&v),
                    "multiplicity": m.to_string(),
                }),
            ))
        }
        GkmCmd::SimpleRoots { height } => {
            let h = parse_ratio(height)?;
            let rs = RootSystem::new(1)?;
            let roots = rs.simple_roots(&h)?;
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for r in &roots {
                lines.push(format!("{r} norm {} height {}", r.norm(), r.height()));
                rows.push(
                    json!({ "vector": r.to_string(), "norm": r.norm().to_string(), "height": r.height().to_string() }),
                );
            }
            lines.push(format!("{} real simple roots of height <= {h}", roots.len()));
            Ok(Report::ok(
                lines.join("\n"),
                json!({ "command": "gkm simple-roots", "height": h.to_string(), "count": roots.len().to_string(), "roots": rows }),
            ))
        }
        GkmCmd::Reduce { vector, max_steps } => {
            let v = RootVector::parse(vector)?;
            let mut rs = RootSystem::new(1)?;
            if let Some(n) = max_steps {
                rs.max_steps = *n;
            }
            let r = rs.reduce_to_chamber(&v)?;
            let text = format!("{} -> {} after {} reflections (parity {})", r.input, r.reduced, r.word.len(), r.parity);
            Ok(Report::ok(
                text,
                json!({
                    "command": "gkm reduce",
                    "input": r.input.to_string(),
                    "reduced": r.reduced.to_string(),
                    "word": strs(&r.word),
                    "parity": r.parity.to_string(),
                }),
            ))
        }
        GkmCmd::Imaginary { n } => {
            let rs = RootSystem::new(n / 2 + 1)?;
            let roots = rs.imaginary_simple_roots(*n)?;
            let text = roots.iter().map(|(v, m)| format!("{v}\t{m}")).collect::<Vec<_>>().join("\n");
            let rows: Vec<Value> =
                roots.iter().map(|(v, m)| json!({ "vector": v.to_string(), "multiplicity": m.to_string() })).collect();
            Ok(Report::ok(text, json!({ "command": "gkm imaginary", "roots": rows })))
        }
        GkmCmd::VerifyDenominator { bound } => {
            let r = system_for_bound(*bound)?.verify_denominator(*bound, cache)?;
            let mut text = r.to_string();
            if !r.equal {
                text = format!("{text}\nproduct {}\nsum {}", gkm::poly_to_text(&r.product), gkm::poly_to_text(&r.sum));
            }
            Ok(Report {
                text,
                json: json!({
                    "command": "gkm verify-denominator",
                    "bound": bound.to_string(),
                    "equal": r.equal,
                    "orbit_points": r.orbit_points.to_string(),
                    "product": strs(&r.product),
                    "sum": strs(&r.sum),
                }),
                verified: r.equal,
            })
        }
        GkmCmd::Consistency { bound } => {
            let r = system_for_bound(*bound)?.exponent_consistency(*bound, cache)?;
            Ok(Report {
                text: r.to_string(),
                json: json!({
                    "command": "gkm consistency",
                    "bound": bound.to_string(),
                    "ok": r.ok(),
                    "classes": r.classes.to_string(),
                    "vectors": r.vectors.to_string(),
                    "roots": r.roots.to_string(),
                    "norm_minus_2_in_l": r.norm_minus_2_in_l.as_ref().map(|m| m.to_string()),
                    "violations": &r.violations,
                }),
                verified: r.ok(),
            })
        }
    }
}

fn parse_ratio(text: &str) -> fbm_core::Result<num_rational::BigRational> {
    let bad = || Error::Input(format!("bad rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (text.trim().parse().map_err(|_| bad())?, 1i64),
    };
    if den <= 0 {
        return Err(bad());
    }
    Ok(ratio(num, den))
}

fn lattice(cmd: &LatticeCmd) -> fbm_core::Result<Report> {
    match cmd {
        LatticeCmd::Genus => {
            let u = Lattice::hyperbolic_plane();
            let a = lattices::lattice_n().direct_sum(&u).genus_invariants()?;
            let b = Lattice::barnes_wall_16().direct_sum(&u.rescale(&ratio(2, 1))?).genus_invariants()?;
            let same = a == b;
            let text = format!(
                "N+II(1,1): {a}\nBW16+II(1,1)(2): {b}\ngenus invariants {}",
                if same { "EQUAL" } else { "DIFFERENT" }
            );
            let inv = |g: &lattices::GenusInvariants| {
                json!({
                    "signature": [g.signature.0.to_string(), g.signature.1.to_string()],
                    "determinant": g.determinant.to_string(),
                    "even": g.even,
                    "invariant_factors": strs(&g.invariant_factors),
                    "norm_counts": g.norm_counts.iter().map(|(r, c)| json!({ "norm": r.to_string(), "count": c.to_string() })).collect::<Vec<_>>(),
                    "milgram": g.milgram,
                })
            };
            Ok(Report {
                text,
                json: json!({ "command": "lattice genus", "first": inv(&a), "second": inv(&b), "equal": same }),
                verified: same,
            })
        }
        LatticeCmd::Theta { lattice, max_norm } => {
            let l = match lattice {
                LatticeName::N => lattices::lattice_n(),
                LatticeName::Bw => Lattice::barnes_wall_16(),
                LatticeName::BwDual => Lattice::barnes_wall_16().dual()?,
            };
            let counts = l.theta_counts(&ratio(*max_norm, 1))?;
            let text = counts.iter().map(|(n, c)| format!("{n}:{c}")).collect::<Vec<_>>().join(" ");
            let rows: Vec<Value> =
                counts.iter().map(|(n, c)| json!({ "norm": n.to_string(), "count": c.to_string() })).collect();
            Ok(Report::ok(
                text,
                json!({ "command": "lattice theta", "lattice": l.label(), "max_norm": max_norm.to_string(), "counts": rows }),
            ))
        }
    }
}
