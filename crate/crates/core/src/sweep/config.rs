use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::chain::{ChainParams, Coupling, DENSE_DIM_CAP};
use crate::coherent::SphereGrid;
use crate::error::{Error, Result};
use crate::spectral::{IprBasis, FULL_BASIS_MAX_QUBITS};

/// Sweeps estimated above this many amplitude operations trigger a warning.
pub const OP_COUNT_WARNING: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_qubits: usize,
    pub b_perp: f64,
    pub b_par: f64,
    pub epsilon: f64,
    pub coupling: Coupling,
    pub t_cut: usize,
    pub grid: SphereGrid,
    pub seed: u64,
    pub gue_samples: usize,
    pub normalize_by_tcut: bool,
    pub ipr_basis: IprBasis,
    pub output_path: Option<PathBuf>,
    pub tail_window_fraction: f64,
}

impl RunConfig {
    /// A config with the given chain and the default grid and options.
    pub fn new(n_qubits: usize, b_perp: f64, b_par: f64, epsilon: f64, coupling: Coupling, t_cut: usize) -> Self {
        Self {
            n_qubits,
            b_perp,
            b_par,
            epsilon,
            coupling,
            t_cut,
            grid: SphereGrid::default(),
            seed: 0,
            gue_samples: 1,
            normalize_by_tcut: false,
            ipr_basis: IprBasis::Auto,
            output_path: None,
            tail_window_fraction: 0.5,
        }
    }

    /// Chain parameters; GUE draws are seeded from the run seed.
    pub fn chain_params(&self) -> ChainParams {
        let mut p = ChainParams::new(self.n_qubits, self.b_perp, self.b_par, self.epsilon, self.coupling);
        if self.coupling == Coupling::VGUE {
            p.gue_seed = Some(self.seed);
        }
        p
    }

    pub fn resolved_ipr_basis(&self) -> IprBasis {
        self.ipr_basis.resolve(self.coupling)
    }

    pub fn validate(&self) -> Result<()> {
        self.chain_params().validate()?;
        if self.t_cut < 2 {
            return Err(Error::InvalidParameter(format!("t_cut must be at least 2, got {}", self.t_cut)));
        }
        if self.gue_samples < 1 {
            return Err(Error::InvalidParameter("gue_samples must be at least 1".into()));
        }
        if self.gue_samples > 1 && self.coupling != Coupling::VGUE {
            return Err(Error::InvalidParameter(format!(
                "gue_samples = {} needs coupling VGUE, got {}",
                self.gue_samples, self.coupling
            )));
        }
        if !(self.tail_window_fraction > 0.0 && self.tail_window_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail_window_fraction must lie in (0, 1], got {}",
                self.tail_window_fraction
            )));
        }
        let dim = 1usize << self.n_qubits;
        if self.coupling == Coupling::VGUE && dim > DENSE_DIM_CAP {
            return Err(Error::DimensionCap { dim, cap: DENSE_DIM_CAP });
        }
        if self.resolved_ipr_basis() == IprBasis::Full && self.n_qubits > FULL_BASIS_MAX_QUBITS {
            return Err(Error::DimensionCap { dim, cap: 1 << FULL_BASIS_MAX_QUBITS });
        }
        self.grid.enumerate()?;
        Ok(())
    }

    /// Rough number of amplitude updates for a full sweep.
    pub fn estimated_ops(&self) -> f64 {
        let dim = (1usize << self.n_qubits) as f64;
        let points = self.grid.thetas().len() as f64 * self.grid.phis().len() as f64;
        let per_step = if self.coupling == Coupling::VGUE {
            dim * dim + dim * self.n_qubits as f64
        } else {
            dim * (self.n_qubits as f64 + 1.0)
        };
        2.0 * points * self.gue_samples as f64 * self.t_cut as f64 * per_step
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut b_perp = None;
        let mut b_par = None;
        let mut epsilon = None;
        let mut coupling = None;
        let mut t_cut = None;
        let mut cfg = RunConfig::new(0, 0.0, 0.0, 0.0, Coupling::VJ, 0);

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: line_no, msg: format!("expected `key = value`, got {line:?}") })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Config { line: line_no, msg };
            match key {
                "n_qubits" => n_qubits = Some(parse_value(value, key, line_no)?),
                "b_perp" => b_perp = Some(parse_value(value, key, line_no)?),
                "b_par" => b_par = Some(parse_value(value, key, line_no)?),
                "epsilon" => epsilon = Some(parse_value(value, key, line_no)?),
                "coupling" => coupling = Some(value.parse::<Coupling>().map_err(|e| bad(e.to_string()))?),
                "t_cut" => t_cut = Some(parse_value(value, key, line_no)?),
                "theta_min" => cfg.grid.theta_min = parse_value(value, key, line_no)?,
                "theta_max" => cfg.grid.theta_max = parse_value(value, key, line_no)?,
                "theta_step" => cfg.grid.theta_step = parse_value(value, key, line_no)?,
                "phi_min" => cfg.grid.phi_min = parse_value(value, key, line_no)?,
                "phi_max" => cfg.grid.phi_max = parse_value(value, key, line_no)?,
                "phi_step" => cfg.grid.phi_step = parse_value(value, key, line_no)?,
                "seed" => cfg.seed = parse_value(value, key, line_no)?,
                "gue_samples" => cfg.gue_samples = parse_value(value, key, line_no)?,
                "normalize_by_tcut" => cfg.normalize_by_tcut = parse_value(value, key, line_no)?,
                "ipr_basis" => cfg.ipr_basis = value.parse::<IprBasis>().map_err(|e| bad(e.to_string()))?,
                "output_path" => cfg.output_path = Some(PathBuf::from(value)),
                "tail_window_fraction" => cfg.tail_window_fraction = parse_value(value, key, line_no)?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }

        let missing = |k: &str| Error::Config { line: 0, msg: format!("missing required key {k:?}") };
        cfg.n_qubits = n_qubits.ok_or_else(|| missing("n_qubits"))?;
        cfg.b_perp = b_perp.ok_or_else(|| missing("b_perp"))?;
        cfg.b_par = b_par.ok_or_else(|| missing("b_par"))?;
        cfg.epsilon = epsilon.ok_or_else(|| missing("epsilon"))?;
        cfg.coupling = coupling.ok_or_else(|| missing("coupling"))?;
        cfg.t_cut = t_cut.ok_or_else(|| missing("t_cut"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The config as `key = value` lines that `parse` reads back unchanged.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let g = &self.grid;
        let _ = writeln!(s, "n_qubits = {}", self.n_qubits);
        let _ = writeln!(s, "b_perp = {:?}", self.b_perp);
        let _ = writeln!(s, "b_par = {:?}", self.b_par);
        let _ = writeln!(s, "epsilon = {:?}", self.epsilon);
        let _ = writeln!(s, "coupling = {}", self.coupling);
        let _ = writeln!(s, "t_cut = {}", self.t_cut);
        for (k, v) in [
            ("theta_min", g.theta_min),
            ("theta_max", g.theta_max),
            ("theta_step", g.theta_step),
            ("phi_min", g.phi_min),
            ("phi_max", g.phi_max),
            ("phi_step", g.phi_step),
        ] {
            let _ = writeln!(s, "{k} = {v:?}");
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "gue_samples = {}", self.gue_samples);
        let _ = writeln!(s, "normalize_by_tcut = {}", self.normalize_by_tcut);
        let _ = writeln!(s, "ipr_basis = {}", self.ipr_basis);
        if let Some(p) = &self.output_path {
            let _ = writeln!(s, "output_path = {}", p.display());
        }
        let _ = writeln!(s, "tail_window_fraction = {:?}", self.tail_window_fraction);
        s
    }
}

fn parse_value<T: FromStr>(value: &str, key: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Config { line, msg: format!("cannot parse {value:?} for {key}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "\
# integrable regime
n_qubits = 6
b_perp = 0.1
b_par = 1.4
epsilon = 0.1   # coupling strength
coupling = VJ
t_cut = 100
theta_step = 0.5
phi_step = 0.5
";

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::parse(BASIC).unwrap();
        assert_eq!(c.n_qubits, 6);
        assert_eq!(c.coupling, Coupling::VJ);
        assert_eq!(c.grid.theta_step, 0.5);
        assert_eq!(c.grid.theta_max, std::f64::consts::PI);
        assert_eq!(c.gue_samples, 1);
        assert_eq!(c.ipr_basis, IprBasis::Auto);
        assert_eq!(c.resolved_ipr_basis(), IprBasis::SectorK0);
        assert_eq!(c.tail_window_fraction, 0.5);
        assert!(c.output_path.is_none());
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::parse(BASIC).unwrap();
        c.output_path = Some("out/run.csv".into());
        c.normalize_by_tcut = true;
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = RunConfig::parse(&format!("{BASIC}t_cutt = 5\n")).unwrap_err();
        assert!(matches!(err, Error::Config { line: 10, .. }), "{err}");
    }

    #[test]
    fn missing_and_malformed() {
        assert!(matches!(RunConfig::parse("n_qubits = 4\n"), Err(Error::Config { line: 0, .. })));
        assert!(matches!(RunConfig::parse("n_qubits 4\n"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(RunConfig::parse("n_qubits = four\n"), Err(Error::Config { line: 1, .. })));
    }

    #[test]
    fn gue_samples_need_gue_coupling() {
        let err = RunConfig::parse(&format!("{BASIC}gue_samples = 4\n")).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
        let ok = BASIC.replace("coupling = VJ", "coupling = VGUE") + "gue_samples = 4\n";
        assert_eq!(RunConfig::parse(&ok).unwrap().gue_samples, 4);
    }

    #[test]
    fn desk_scale_caps() {
        let full = BASIC.replace("n_qubits = 6", "n_qubits = 13") + "ipr_basis = FULL\n";
        assert!(matches!(RunConfig::parse(&full), Err(Error::DimensionCap { .. })));
        let gue = BASIC.replace("n_qubits = 6", "n_qubits = 13").replace("coupling = VJ", "coupling = VGUE");
        assert!(matches!(RunConfig::parse(&gue), Err(Error::DimensionCap { .. })));
        let sector = BASIC.replace("n_qubits = 6", "n_qubits = 14");
        assert!(RunConfig::parse(&sector).is_ok());
    }

    #[test]
    fn op_estimate_scales() {
        let c = RunConfig::parse(BASIC).unwrap();
        let points = (c.grid.thetas().len() * c.grid.phis().len()) as f64;
        assert_eq!(c.estimated_ops(), 2.0 * points * 100.0 * 64.0 * 7.0);
    }
}
