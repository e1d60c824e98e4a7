use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "statatom",
    version,
    about = "Statistical (Thomas-Fermi) theory of atoms: batch computations with CSV/JSON output",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Tf,
    TfScott,
    Statistical,
}

/// Options shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// File of `key=value` lines supplying defaults for the command's flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Shooting tolerance of the TF solve.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// End of the stored neutral grid (overrides STATATOM_XMAX).
    #[arg(long)]
    pub x_max: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ZRange {
    #[arg(long, default_value_t = 1.0)]
    pub z_min: f64,
    #[arg(long, default_value_t = 120.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub z_step: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the neutral-atom TF equation and tabulate F and F'.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Solve for a positive ion of ionization degree q = (Z - N)/Z.
    Ion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        q: f64,
    },
    /// Binding energies over a range of Z, term by term.
    Energy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: ZRange,
        #[arg(long, value_enum, default_value = "statistical")]
        model: Model,
    },
    /// Noninteracting electrons in Bohr shells: shell count and binding energy of neutral atoms.
    Nie {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: ZRange,
    },
    /// Potential, density and radial density on a logarithmic radius grid.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        z: f64,
        /// Ionization degree; 0 for the neutral atom.
        #[arg(long, default_value_t = 0.0)]
        q: f64,
        #[arg(long, default_value_t = 1e-4)]
        r_min: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Validity parameter Z^(1/3) sqrt(x F(x)) on a logarithmic x grid, for several Z.
    Validity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        z: Vec<f64>,
        #[arg(long, default_value_t = 1e-4)]
        x_min: f64,
        #[arg(long, default_value_t = 1e3)]
        x_end: f64,
        #[arg(long, default_value_t = 141)]
        points: usize,
    },
    /// Curves nu(E, lambda) at fixed energy in the TF potential.
    Degeneracy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 88.0)]
        z: f64,
        /// Energies in units of Z^(4/3) (atomic units).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,-0.05,-0.2,-1")]
        scaled_energies: Vec<f64>,
        #[arg(long, default_value_t = 60)]
        points: usize,
    },
    /// Orbitals below the zero-energy degeneracy curve.
    Occupied {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 88.0)]
        z: f64,
    },
    /// Leading shell oscillation of the binding energy on a grid in Z^(1/3).
    Oscillation {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        z_min: f64,
        #[arg(long, default_value_t = 125.0)]
        z_max: f64,
        /// Grid step in Z^(1/3).
        #[arg(long, default_value_t = 0.02)]
        grid_zcube: f64,
        /// Truncate the Fourier series after this many terms instead of the closed form.
        #[arg(long)]
        k: Option<u32>,
        /// Use lambda0 = 0.928 Z^(1/3) instead of the value from the solved F.
        #[arg(long)]
        pin_lambda0: bool,
    },
    /// Compare a reference table of binding energies with a model.
    Compare {
        #[command(flatten)]
        common: Common,
        /// CSV with header `Z,minusE,label`, energies in atomic units.
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, value_enum, default_value = "statistical")]
        model: Model,
        /// Tabulate the scaled deviation against the semiclassical oscillation instead.
        #[arg(long)]
        overlay: bool,
        /// Fit a constant offset between deviation and oscillation (with --overlay).
        #[arg(long)]
        fit_offset: bool,
        #[arg(long)]
        pin_lambda0: bool,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Solve { common }
            | Command::Ion { common, .. }
            | Command::Energy { common, .. }
            | Command::Nie { common, .. }
            | Command::Density { common, .. }
            | Command::Validity { common, .. }
            | Command::Degeneracy { common, .. }
            | Command::Occupied { common, .. }
            | Command::Oscillation { common, .. }
            | Command::Compare { common, .. } => common,
        }
    }
}
