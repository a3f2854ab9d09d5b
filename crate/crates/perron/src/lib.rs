//! Command-line front end for exact Perron expansions.

use std::{io::Write, path::PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

pub mod commands;
pub mod descriptor;
pub mod diagram;
pub mod error;
pub mod number;
pub mod output;
pub mod spec;

use commands::{Ctx, DiagramArgs, Render};
use error::Exit;
use output::{Format, Style};
use spec::Rep;

#[derive(Debug, Parser)]
#[command(name = "perron", version, about = "Exact positive and alternating Perron expansions")]
pub struct Cli {
    /// Builtin system name or path to a JSON system descriptor [default: luroth].
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Representation: `p` (positive) or `pminus` (alternating).
    #[arg(long, global = true, value_enum, default_value_t = Rep::P)]
    pub rep: Rep,
    #[arg(long, global = true, value_enum, default_value_t = Format::Fraction)]
    pub format: Format,
    /// Digits after the point in decimal output.
    #[arg(long, global = true, default_value_t = 20)]
    pub precision: usize,
    /// Accept decimal literals and read them as exact rationals.
    #[arg(long, global = true)]
    pub as_exact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First digits of a number, with the enclosing cylinder.
    Expand {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(short = 'n', long = "digits", default_value_t = 10)]
        n: usize,
    },
    /// Endpoints and diameter of the cylinder of a digit base.
    Cylinder {
        #[arg(required = true)]
        digits: Vec<BigUint>,
    },
    /// Whether a number is a cylinder endpoint.
    Classify {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = spec::POINT_DEPTH)]
        depth: usize,
    },
    /// Membership in the exceptional set of the alternating expansion.
    IsMember {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Decide convergence of a sequence family described by a JSON file.
    Converge { spec: PathBuf },
    /// Draw nested cylinders below a base (`root` for the unit interval).
    Diagram {
        base: Vec<String>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = diagram::DEFAULT_WIDTH)]
        width: usize,
        #[arg(long, default_value_t = diagram::DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        #[arg(long, value_enum, default_value_t = Render::Text)]
        render: Render,
    },
    /// List the builtin digit systems and any custom `--system`.
    Systems,
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage.code() } else { Exit::Ok.code() };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let ctx = Ctx {
        system: cli.system.clone(),
        rep: cli.rep,
        style: Style { format: cli.format, precision: cli.precision },
        as_exact: cli.as_exact,
    };
    let result = match &cli.command {
        Command::Expand { x, n } => commands::expand(&ctx, x, *n),
        Command::Cylinder { digits } => commands::cylinder_cmd(&ctx, digits),
        Command::Classify { x, depth } => commands::classify(&ctx, x, *depth),
        Command::IsMember { x, depth } => commands::is_member(&ctx, x, *depth),
        Command::Converge { spec } => commands::converge(&ctx, spec),
        Command::Diagram { base, depth, width, depth_cap, render } => commands::diagram_cmd(
            &ctx,
            DiagramArgs { base, depth: *depth, width: *width, depth_cap: *depth_cap, render: *render },
        ),
        Command::Systems => commands::systems(&ctx),
    };
    match result {
        Ok((text, exit)) => {
            let _ = out.write_all(text.as_bytes());
            exit.code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit.code()
        }
    }
}
