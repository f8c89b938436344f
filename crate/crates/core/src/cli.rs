//! Command-line front end: enumeration, f-vectors, Hasse diagrams, checks,
//! the bipartition codec and the PROP term of a pair.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::leveled::{
    bipermutahedron_poset, enumerate_leveled_pairs, gamma_decode, gamma_encode, opet_iso_check,
    tau, ComplementaryPair, OrderedBipartition,
};
use crate::multiplihedron::{enumerate_painted, multiplihedron_poset, prop_d_report};
use crate::poset::FinitePoset;
use crate::prop::{theorem_c_report, varpi, varpi_expr};
use crate::tree::{enumerate_trees, face_poset_associahedron, Orientation};
use crate::zone::{biassociahedron_poset, enumerate_zone_pairs};

/// Default bound on `m + n` (the second arity counts as 1 for single-tree families).
pub const SIZE_BOUND: usize = 8;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "BIASSOC_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "biassoc",
    version,
    about = "Face posets of bipermutahedra, biassociahedra and multiplihedra"
)]
struct Cli {
    /// Lift the size bound on m + n.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Perm,
    Biperm,
    Assoc,
    Biassoc,
    Multipl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct Sizes {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of inputs.
    #[arg(short, long)]
    m: usize,
    /// Number of outputs (two-tree families only).
    #[arg(short, long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Opet,
    Thmc,
    Propd,
    Euler,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// List the elements of a face poset in canonical order.
    Enumerate {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the f-vector.
    Fvector {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the covering relations.
    Hasse {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Same as `--format dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Run an exhaustive check and print a one-line report.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long)]
        n: Option<usize>,
        /// Family for the Euler check.
        #[arg(long, value_enum, default_value = "biassoc")]
        family: Family,
    },
    /// Convert between leveled pairs and ordered bipartitions.
    Encode {
        /// A pair `U ~ D` to encode, or a bipartition to decode.
        input: String,
        /// Use the balloon/ball bipartition codec.
        #[arg(long)]
        gamma: bool,
        /// Reverse the block order of the bipartition.
        #[arg(long)]
        tau: bool,
        /// Inputs, required for decoding.
        #[arg(short, long)]
        m: Option<usize>,
        /// Outputs, required for decoding.
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the PROP term of a pair `U ~ D`.
    Varpi {
        pair: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Check(String),
    /// The reader closed the output early; not an error.
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Usage(format!("output error: {e}"))
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

impl Sizes {
    fn second(&self) -> Result<usize, Failure> {
        match (self.family, self.n) {
            (Family::Perm | Family::Assoc, None | Some(1)) => Ok(1),
            (Family::Multipl, None | Some(2)) => Ok(2),
            (Family::Perm | Family::Assoc, Some(_)) => {
                Err(Failure::Usage("this family takes no -n (or -n 1)".into()))
            }
            (Family::Multipl, Some(_)) => Err(Failure::Usage("the multiplihedron has -n 2".into())),
            (_, Some(n)) => Ok(n),
            (_, None) => Err(Failure::Usage("this family needs -n".into())),
        }
    }
}

fn guard(m: usize, n: usize, allow_large: bool) -> Outcome {
    if m == 0 || n == 0 {
        return Err(Failure::Usage("sizes must be at least 1".into()));
    }
    if m + n > SIZE_BOUND && !allow_large {
        return Err(Failure::Usage(format!(
            "m + n = {} exceeds the tractability bound {SIZE_BOUND}; pass --allow-large to override",
            m + n
        )));
    }
    Ok(())
}

fn poset_of(family: Family, m: usize, n: usize) -> crate::Result<FinitePoset> {
    match family {
        Family::Perm => bipermutahedron_poset(m, 1),
        Family::Biperm => bipermutahedron_poset(m, n),
        Family::Assoc => face_poset_associahedron(m),
        Family::Biassoc => biassociahedron_poset(m, n),
        Family::Multipl => multiplihedron_poset(m),
    }
}

fn elements_of(
    family: Family,
    m: usize,
    n: usize,
) -> crate::Result<Vec<(String, serde_json::Value)>> {
    Ok(match family {
        Family::Perm | Family::Biperm => {
            let n = if family == Family::Perm { 1 } else { n };
            enumerate_leveled_pairs(m, n)?
                .iter()
                .map(|x| (x.to_string(), x.to_json()))
                .collect()
        }
        Family::Assoc => enumerate_trees(m, Orientation::Up)?
            .iter()
            .map(|t| (t.to_string(), t.to_json()))
            .collect(),
        Family::Biassoc => enumerate_zone_pairs(m, n)?
            .iter()
            .map(|z| (z.to_string(), z.to_json()))
            .collect(),
        Family::Multipl => enumerate_painted(m)?
            .iter()
            .map(|p| (p.to_string(), p.to_json()))
            .collect(),
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Perm => "perm",
        Family::Biperm => "biperm",
        Family::Assoc => "assoc",
        Family::Biassoc => "biassoc",
        Family::Multipl => "multipl",
    }
}

fn write_json(out: &mut dyn Write, v: &serde_json::Value) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let big = cli.allow_large;
    match cli.verb {
        Verb::Enumerate { sizes, format } => {
            let n = sizes.second()?;
            guard(sizes.m, n, big)?;
            let els = elements_of(sizes.family, sizes.m, n)?;
            match format {
                Format::Text => {
                    for (text, _) in &els {
                        writeln!(out, "{text}")?;
                    }
                }
                Format::Json => write_json(
                    out,
                    &json!({
                        "family": family_name(sizes.family),
                        "m": sizes.m,
                        "n": n,
                        "count": els.len(),
                        "elements": els.into_iter().map(|e| e.1).collect::<Vec<_>>(),
                    }),
                )?,
                Format::Dot => return Err(Failure::Usage("enumerate has no dot output".into())),
            }
        }
        Verb::Fvector { sizes, format } => {
            let n = sizes.second()?;
            guard(sizes.m, n, big)?;
            let g = poset_of(sizes.family, sizes.m, n)?.grading();
            if !g.graded {
                return Err(Failure::Check("the poset is not graded".into()));
            }
            match format {
                Format::Text => {
                    let s: Vec<String> = g.fvector.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "{}", s.join(" "))?;
                }
                Format::Json => write_json(out, &json!(g.fvector))?,
                Format::Dot => return Err(Failure::Usage("fvector has no dot output".into())),
            }
        }
        Verb::Hasse { sizes, format, dot } => {
            let n = sizes.second()?;
            guard(sizes.m, n, big)?;
            let p = poset_of(sizes.family, sizes.m, n)?;
            match if dot { Format::Dot } else { format } {
                Format::Text => {
                    for (i, j) in p.hasse() {
                        writeln!(out, "{} < {}", p.key(i), p.key(j))?;
                    }
                }
                Format::Json => write_json(
                    out,
                    &serde_json::to_value(p.to_json()).expect("serializable"),
                )?,
                Format::Dot => write!(out, "{}", p.to_dot(family_name(sizes.family)))?,
            }
        }
        Verb::Verify {
            check,
            m,
            n,
            family,
        } => verify(check, m, n, family, big, out)?,
        Verb::Encode {
            input,
            gamma,
            tau: reverse,
            m,
            n,
            format,
        } => {
            if !gamma {
                return Err(Failure::Usage("choose a codec: --gamma".into()));
            }
            if input.contains('~') {
                let x = ComplementaryPair::parse(&input)?;
                let mut b = gamma_encode(&x);
                if reverse {
                    b = tau(&b);
                }
                match format {
                    Format::Json => write_json(out, &b.to_json())?,
                    _ => writeln!(out, "{b}")?,
                }
            } else {
                let (Some(m), Some(n)) = (m, n) else {
                    return Err(Failure::Usage("decoding needs -m and -n".into()));
                };
                let mut b = OrderedBipartition::parse(&input, m, n)?;
                if reverse {
                    b = tau(&b);
                }
                let x = gamma_decode(&b)?;
                match format {
                    Format::Json => write_json(out, &x.to_json())?,
                    _ => writeln!(out, "{x}")?,
                }
            }
        }
        Verb::Varpi { pair, format } => {
            let x = ComplementaryPair::parse(&pair)?;
            let expr = varpi_expr(&x);
            let term = varpi(&x).canonical();
            match format {
                Format::Json => {
                    let mut v = term.to_json();
                    v["expr"] = json!(expr.to_string());
                    v["pair"] = json!(x.to_string());
                    write_json(out, &v)?;
                }
                _ => {
                    writeln!(out, "{expr}")?;
                    writeln!(out, "{term}")?;
                }
            }
        }
    }
    Ok(())
}

fn verify(
    check: Check,
    m: usize,
    n: Option<usize>,
    family: Family,
    big: bool,
    out: &mut dyn Write,
) -> Outcome {
    match check {
        Check::Opet => {
            let n = n.ok_or_else(|| Failure::Usage("opet needs -n".into()))?;
            guard(m, n, big)?;
            if opet_iso_check(m, n)? {
                writeln!(
                    out,
                    "opet: pairs of arity ({m},{n}) match leveled trees with {} leaves",
                    m + n - 1
                )?;
            } else {
                return Err(Failure::Check(format!("opet: mismatch at arity ({m},{n})")));
            }
        }
        Check::Thmc => {
            let n = n.ok_or_else(|| Failure::Usage("thmc needs -n".into()))?;
            guard(m, n, big)?;
            let r = theorem_c_report(m, n)?;
            if r.agree() {
                writeln!(out, "{} classes, kernels agree", r.joint_classes)?;
            } else {
                return Err(Failure::Check(format!(
                    "kernels differ: {} term classes, {} zone classes, {} joint",
                    r.term_classes, r.zone_classes, r.joint_classes
                )));
            }
        }
        Check::Propd => {
            if n.is_some_and(|n| n != 2) {
                return Err(Failure::Usage(
                    "propd compares against two outputs; omit -n".into(),
                ));
            }
            guard(m, 2, big)?;
            let r = prop_d_report(m)?;
            if r.isomorphic() {
                let how = if r.natural {
                    "natural map"
                } else {
                    "searched map"
                };
                writeln!(out, "{} faces, isomorphic ({how})", r.faces)?;
            } else {
                return Err(Failure::Check(format!("{} faces, not isomorphic", r.faces)));
            }
        }
        Check::Euler => {
            let sizes = Sizes { family, m, n };
            let n = sizes.second()?;
            guard(m, n, big)?;
            let chi = poset_of(family, m, n)?
                .euler()
                .map_err(|e| Failure::Check(e.to_string()))?;
            if chi == 1 {
                writeln!(out, "euler characteristic 1")?;
            } else {
                return Err(Failure::Check(format!(
                    "euler characteristic {chi}, expected 1"
                )));
            }
        }
    }
    Ok(())
}

/// Applies the thread cap from the environment, once per process.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    // a second call in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    match dispatch(cli, out) {
        Ok(()) | Err(Failure::Closed) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(out, "{msg}");
            EXIT_FAILED
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("biassoc").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn fvectors() {
        assert_eq!(
            call(&["fvector", "--family", "biassoc", "-m", "3", "-n", "2"]).1,
            "6 6 1\n"
        );
        assert_eq!(
            call(&["fvector", "--family", "assoc", "-m", "4"]).1,
            "5 5 1\n"
        );
        assert_eq!(
            call(&["fvector", "--family", "multipl", "-m", "3"]).1,
            "6 6 1\n"
        );
        assert_eq!(
            call(&["fvector", "--family", "perm", "-m", "4", "--format", "json"]).1,
            "[\n  6,\n  6,\n  1\n]\n"
        );
    }

    #[test]
    fn verify_reports() {
        assert_eq!(
            call(&["verify", "thmc", "-m", "3", "-n", "2"]),
            (0, "13 classes, kernels agree\n".into(), String::new())
        );
        assert_eq!(call(&["verify", "propd", "-m", "3"]).0, 0);
        assert_eq!(call(&["verify", "opet", "-m", "2", "-n", "2"]).0, 0);
        assert_eq!(
            call(&["verify", "euler", "-m", "2", "-n", "3"]).1,
            "euler characteristic 1\n"
        );
    }

    #[test]
    fn codec() {
        let (code, out, _) = call(&["encode", "--gamma", "((* * (* *)4)3 (* (* *)4 *)2)1 ~ *"]);
        assert_eq!((code, out.as_str()), (0, "(4|57|12|36)\n"));
        let (_, out, _) = call(&[
            "encode",
            "--gamma",
            "--tau",
            "((* * (* *)4)3 (* (* *)4 *)2)1 ~ *",
        ]);
        assert_eq!(out, "(36|12|57|4)\n");
        let (code, out, _) = call(&["encode", "--gamma", "(4|57|12|36)", "-m", "8", "-n", "1"]);
        assert_eq!(
            (code, out.as_str()),
            (0, "((* * (* *)4)3 (* (* *)4 *)2)1 ~ *\n")
        );
        assert_eq!(call(&["encode", "--gamma", "(4|57|12|36)"]).0, 2);
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = call(&["enumerate", "--family", "biperm", "-m", "5", "-n", "4"]);
        assert_eq!(code, 2);
        assert!(err.contains("tractability bound 8"));
        assert_eq!(call(&["enumerate", "--family", "biperm", "-m", "3"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["varpi", "(* *)1 ~ (* *"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn enumerate_and_hasse() {
        let (code, out, _) = call(&["enumerate", "--family", "biassoc", "-m", "2", "-n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        let again = call(&["enumerate", "--family", "biassoc", "-m", "2", "-n", "2"]).1;
        assert_eq!(out, again);
        let (_, js, _) = call(&[
            "enumerate",
            "--family",
            "multipl",
            "-m",
            "2",
            "--format",
            "json",
        ]);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["count"], 3);
        let (_, dot, _) = call(&["hasse", "--family", "assoc", "-m", "3", "--dot"]);
        assert!(dot.starts_with("digraph"));
        let (_, text, _) = call(&["hasse", "--family", "perm", "-m", "3"]);
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn varpi_output() {
        let (code, out, _) = call(&["varpi", "(* *)2 ~ (* *)1"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.lines().next().unwrap(),
            "V(V(H(e,e),x[2,1]),V(x[1,2],H(e,e)))"
        );
        let (_, js, _) = call(&["varpi", "(* *)1 ~ (* *)1", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn closed_output_is_quiet() {
        struct Closed;
        impl Write for Closed {
            fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
                Err(std::io::ErrorKind::BrokenPipe.into())
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        let mut err = Vec::new();
        let code = run(
            ["biassoc", "enumerate", "--family", "assoc", "-m", "4"],
            &mut Closed,
            &mut err,
        );
        assert_eq!(code, EXIT_OK);
        assert!(err.is_empty());
    }
}
