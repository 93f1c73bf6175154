//! `fbr`: command-line access to fibered Burnside rings.

mod docs;
mod session;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fbr_core::group::ResourceCaps;
use fbr_core::species::Species;
use fbr_core::verify::{run_acceptance, VerifyConfig};
use fbr_core::{Exec, FbrError, Result};

use session::{Session, SessionConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(name = "fbr", version, about = "Fibered Burnside rings of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group: C<n>, D<n>, S<n>, A<n>, V4, Q8 or perm:<degree>:<cycles>;<cycles>...
    #[arg(long, global = true)]
    group: Option<String>,

    /// Fiber: invariant factors such as 2, 2x4 or A=6; 1 for the trivial group.
    #[arg(long, global = true, default_value = "1")]
    fiber: String,

    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Directory for cached lattices and structure constants.
    #[arg(long, global = true, env = "FBR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Largest group order accepted.
    #[arg(long, global = true, default_value_t = ResourceCaps::default().max_group_order)]
    cap_order: usize,

    /// Seed for the sampled checks of verify-all.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the standard basis orbits [K, φ].
    Basis,
    /// Multiply two elements given as comma-separated `index[:coeff]` terms.
    Multiply {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Species table and its determinant.
    Species,
    /// Primitive idempotents in the standard basis.
    Idempotents,
    /// Partition of the dual orbits at characteristic 0 or a prime.
    Spectrum {
        /// 0 or a prime; omitted means 0 and every prime divisor of |G|.
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Block idempotents and block bases.
    Blocks,
    /// The block isomorphism for a perfect subgroup J.
    Weyl {
        /// A group spec matched by order, or #<class index>.
        #[arg(long)]
        perfect: String,
    },
    /// Run the acceptance suite, on the catalog or on --group/--fiber.
    VerifyAll,
}

impl Cli {
    fn caps(&self) -> ResourceCaps {
        ResourceCaps {
            max_group_order: self.cap_order,
            ..ResourceCaps::default()
        }
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }

    fn session(&self) -> Result<Session> {
        let group = self
            .group
            .clone()
            .ok_or_else(|| FbrError::input("--group is required for this command"))?;
        Session::open(SessionConfig {
            group_spec: group,
            fiber_spec: self.fiber.clone(),
            cache_dir: self.cache_dir.clone(),
            caps: self.caps(),
            exec: self.exec(),
        })
    }
}

fn run(cli: &Cli) -> Result<docs::Output> {
    if let Command::VerifyAll = cli.command {
        let mut cfg = match &cli.group {
            Some(g) => VerifyConfig::single(g, &cli.fiber),
            None => VerifyConfig::default(),
        };
        cfg.seed = cli.seed;
        cfg.caps = cli.caps();
        cfg.exec = cli.exec();
        return Ok(docs::verify(&run_acceptance(&cfg)?));
    }
    let session = cli.session()?;
    let ring = &session.ring;
    let spec = session.config.group_spec.as_str();
    let out = match &cli.command {
        Command::Basis => docs::basis(ring, spec),
        Command::Multiply { left, right } => {
            let x = docs::parse_element(ring, left)?;
            let y = docs::parse_element(ring, right)?;
            docs::multiply(ring, spec, &x, &y)?
        }
        Command::Species => docs::species(&Species::new(ring)?, spec)?,
        Command::Idempotents => docs::idempotents(&Species::new(ring)?, spec),
        Command::Spectrum { characteristic } => docs::spectrum(&Species::new(ring)?, spec, *characteristic)?,
        Command::Blocks => docs::blocks(&Species::new(ring)?, spec)?,
        Command::Weyl { perfect } => {
            let class = docs::resolve_perfect(ring, perfect, cli.cap_order)?;
            docs::weyl(&Species::new(ring)?, spec, class, cli.caps())?
        }
        Command::VerifyAll => unreachable!("handled above"),
    };
    session.save()?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
                Format::Table => out.table,
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("fbr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
