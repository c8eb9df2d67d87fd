//! Command-line interface.
//!
//! Exit codes: 0 success, 1 verification found a nonzero product, 2 usage,
//! parse, shape or ring errors, 3 enumeration budget exceeded, 4 operation
//! counters disagree with their closed forms, 5 output could not be written.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{run_suite, write_csv, BenchGrid, SuiteOptions};
use crate::error::Error;
use crate::matrix::{Matrix, Permutation};
use crate::paritycheck::{
    parity_check_bruteforce, parity_check_iterative, parity_check_minors, verify_parity,
};
use crate::stdform::standard_form;
use crate::textfmt::{format_matrix, format_standard_form, parse_document, parse_matrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONZERO_PRODUCT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_COUNTERS: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "zps-parity",
    version,
    about = "Parity-check matrices of additive codes over Z_{p^s}"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Minors,
    Iterative,
    Bruteforce,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a generator matrix to standard form.
    StdForm {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute a parity-check matrix.
    ParityCheck {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "iterative")]
        method: MethodArg,
        /// Emit H in the input's coordinates instead of the standard form's.
        #[arg(long)]
        original_coords: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that G H^T = 0.
    Verify {
        generator: PathBuf,
        parity_check: PathBuf,
    },
    /// Time both constructions over a parameter grid and write CSV.
    Bench {
        #[arg(long)]
        p: u64,
        /// Inclusive range `a:b`.
        #[arg(long, value_parser = parse_range)]
        s_range: (usize, usize),
        /// Inclusive range `a:b`.
        #[arg(long, value_parser = parse_range)]
        ell_range: (usize, usize),
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_counter_mismatch: bool,
    },
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected `a:b`, found `{text}`"))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start `{a}`"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

/// A failure carrying its exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::CounterMismatch { .. } => EXIT_COUNTERS,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn with_path(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

fn emit(output: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let result = match output {
        Some(path) => fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot write output: {e}"),
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::StdForm { input, output } => {
            let g = parse_matrix(&read(&input)?).map_err(with_path(&input))?;
            let sf = standard_form(&g);
            emit(output.as_deref(), &format_standard_form(&sf), stdout)?;
            Ok(EXIT_OK)
        }
        Command::ParityCheck {
            input,
            method,
            original_coords,
            output,
        } => {
            let doc = parse_document(&read(&input)?).map_err(with_path(&input))?;
            let sf = standard_form(&doc.matrix);
            let (h, perm) = match method {
                MethodArg::Bruteforce => {
                    let dual = parity_check_bruteforce(sf.matrix())?;
                    let _ = writeln!(stderr, "dual codewords: {}", dual.nrows());
                    (dual, sf.permutation().clone())
                }
                MethodArg::Minors | MethodArg::Iterative => {
                    let result = if method == MethodArg::Minors {
                        parity_check_minors(&sf)
                    } else {
                        parity_check_iterative(&sf)
                    };
                    let c = &result.counters;
                    let _ = writeln!(
                        stderr,
                        "counters: big_mults={} big_adds={} small_mults={} small_adds={} scalar_ops={}",
                        c.big_mults,
                        c.big_adds,
                        c.small_mults,
                        c.small_adds,
                        c.scalar_cost()
                    );
                    (result.h, sf.permutation().clone())
                }
            };
            let h = if original_coords {
                unpermute(&h, &perm, doc.perm.as_ref()).map_err(with_path(&input))?
            } else {
                h
            };
            emit(output.as_deref(), &format_matrix(&h), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            generator,
            parity_check,
        } => {
            let g = parse_matrix(&read(&generator)?).map_err(with_path(&generator))?;
            let h = parse_matrix(&read(&parity_check)?).map_err(with_path(&parity_check))?;
            let verdict = verify_parity(&g, &h)?;
            match verdict.certificate {
                None => {
                    let _ = writeln!(stdout, "ok: G H^T = 0");
                    Ok(EXIT_OK)
                }
                Some(c) => {
                    let _ = writeln!(
                        stdout,
                        "nonzero: (G H^T)[{}, {}] = {}",
                        c.row, c.col, c.value
                    );
                    Ok(EXIT_NONZERO_PRODUCT)
                }
            }
        }
        Command::Bench {
            p,
            s_range,
            ell_range,
            n_list,
            trials,
            seed,
            out,
            inject_counter_mismatch,
        } => {
            let s_values = (s_range.0..=s_range.1)
                .map(|s| {
                    u32::try_from(s)
                        .map_err(|_| Error::InvalidGrid(format!("s = {s} is too large")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let grid = BenchGrid {
                p,
                s_values,
                ell_values: (ell_range.0..=ell_range.1).collect(),
                n_values: n_list,
                trials,
                seed,
            };
            let records = run_suite(
                &grid,
                SuiteOptions {
                    inject_counter_mismatch,
                },
            )?;
            let mut buf = Vec::new();
            write_csv(&records, &mut buf).map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("cannot format CSV: {e}"),
            })?;
            let text = String::from_utf8(buf).expect("CSV output is UTF-8");
            emit(out.as_deref(), &text, stdout)?;
            let _ = writeln!(
                stderr,
                "{} records, counters match the closed forms",
                records.len()
            );
            Ok(EXIT_OK)
        }
    }
}

/// Maps `h` from standard-form coordinates back to the input's, and further
/// back through a `perm:` line the input may carry.
fn unpermute(
    h: &Matrix,
    perm: &Permutation,
    carried: Option<&Permutation>,
) -> Result<Matrix, Error> {
    let total = match carried {
        None => perm.clone(),
        Some(outer) => {
            if outer.degree() != perm.degree() {
                return Err(Error::InvalidPermutation(format!(
                    "perm line has degree {}, matrix has {} columns",
                    outer.degree(),
                    perm.degree()
                )));
            }
            Permutation::from_images(
                (0..perm.degree())
                    .map(|j| outer.apply(perm.apply(j)))
                    .collect(),
            )?
        }
    };
    h.apply_col_permutation(&total.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2:6"), Ok((2, 6)));
        assert_eq!(parse_range("3:3"), Ok((3, 3)));
        assert!(parse_range("6:2").is_err());
        assert!(parse_range("6").is_err());
        assert!(parse_range("a:2").is_err());
    }

    #[test]
    fn usage_errors() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run_with(["zps-parity", "frobnicate"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert_eq!(
            run_with(["zps-parity", "--help"], &mut out, &mut err),
            EXIT_OK
        );
        assert_eq!(
            run_with(
                ["zps-parity", "std-form", "/nonexistent/file"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
    }

    #[test]
    fn carried_permutation_composes() {
        let ring = crate::zring::RingSpec::z4();
        let h = Matrix::from_rows(ring, &[[1, 2, 3]]).unwrap();
        let inner = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let outer = Permutation::from_images(vec![2, 0, 1]).unwrap();
        // std column j came from original column outer(inner(j)) = [0, 2, 1]
        let back = unpermute(&h, &inner, Some(&outer)).unwrap();
        assert_eq!(back.to_rows(), vec![vec![1, 3, 2]]);
    }
}
