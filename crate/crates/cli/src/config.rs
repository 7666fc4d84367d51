//! Network configuration from a TOML file plus command-line overrides.
//!
//! Densities and powers without a published value (target received power,
//! amplifier efficiency, receiver overhead, minimum received power) have no
//! default and must be given in the file or as flags.

use std::path::{Path, PathBuf};

use clap::Args;
use m2m_agg::model::NetworkConfig;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda: Option<f64>,
    pub lambda_bs: Option<f64>,
    pub alpha: Option<f64>,
    pub p_bar_t: Option<f64>,
    pub p_t_max: Option<f64>,
    pub eta: Option<f64>,
    pub p_lo: Option<f64>,
    pub p_rx: Option<f64>,
    pub p_tx: Option<f64>,
    pub p_o: Option<f64>,
    pub w: Option<f64>,
    pub m_payload: Option<f64>,
    pub p_r_min: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Configuration flags shared by every subcommand. Flags override the file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML configuration file
    #[arg(long, global = true, env = "M2MAGG_CONFIG")]
    pub config: Option<PathBuf>,
    /// Device density λ (per km²) [default: 1000]
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Base station density λ_BS (per km²) [default: 1]
    #[arg(long, global = true)]
    pub lambda_bs: Option<f64>,
    /// Path-loss exponent α [default: 4]
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Target received power P̄_T (mW), required
    #[arg(long, global = true)]
    pub p_bar_t: Option<f64>,
    /// Maximum transmit power P_Tmax (mW); `inf` disables truncation [default: inf]
    #[arg(long, global = true)]
    pub p_t_max: Option<f64>,
    /// Power amplifier efficiency η in (0, 1], required
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    /// Local oscillator power P_LO (mW) [default: 5]
    #[arg(long, global = true)]
    pub p_lo: Option<f64>,
    /// Receiver block power P_RX (mW) [default: 200]
    #[arg(long, global = true)]
    pub p_rx: Option<f64>,
    /// Transmitter block power P_TX (mW) [default: 100]
    #[arg(long, global = true)]
    pub p_tx: Option<f64>,
    /// Receiver overhead power P_O (mW), required
    #[arg(long, global = true)]
    pub p_o: Option<f64>,
    /// Bandwidth W (Hz) [default: 100000]
    #[arg(long, global = true)]
    pub w: Option<f64>,
    /// Payload M (bits) [default: 100]
    #[arg(long, global = true)]
    pub m_payload: Option<f64>,
    /// Minimum received power P_Rmin (mW), required by `hops`
    #[arg(long, global = true)]
    pub p_r_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub net: NetworkConfig,
    pub p_r_min: Option<f64>,
}

impl Resolved {
    /// `key=value` pairs in a fixed order, for the output header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let n = &self.net;
        let mut out: Vec<(String, String)> = [
            ("lambda", n.lambda),
            ("lambda_bs", n.lambda_bs),
            ("alpha", n.alpha),
            ("p_bar_t", n.p_bar_t),
            ("p_t_max", n.p_t_max),
            ("eta", n.eta),
            ("p_lo", n.p_lo),
            ("p_rx", n.p_rx),
            ("p_tx", n.p_tx),
            ("p_o", n.p_o),
            ("w", n.w),
            ("m_payload", n.m_payload),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        if let Some(p) = self.p_r_min {
            out.push(("p_r_min".into(), p.to_string()));
        }
        out
    }

    pub fn require_p_r_min(&self) -> Result<f64, CliError> {
        self.p_r_min.ok_or_else(|| CliError::Config("p_r_min has no default; pass --p-r-min or set it in the config".into()))
    }
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let required = |flag: Option<f64>, file: Option<f64>, name: &str| {
            flag.or(file).ok_or_else(|| {
                CliError::Config(format!("{name} has no default; pass --{} or set {name} in the config", name.replace('_', "-")))
            })
        };
        let base = NetworkConfig::reference(
            required(self.p_bar_t, file.p_bar_t, "p_bar_t")?,
            required(self.eta, file.eta, "eta")?,
            required(self.p_o, file.p_o, "p_o")?,
        );
        let pick = |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
        let net = NetworkConfig {
            lambda: pick(self.lambda, file.lambda, base.lambda),
            lambda_bs: pick(self.lambda_bs, file.lambda_bs, base.lambda_bs),
            alpha: pick(self.alpha, file.alpha, base.alpha),
            p_t_max: pick(self.p_t_max, file.p_t_max, base.p_t_max),
            p_lo: pick(self.p_lo, file.p_lo, base.p_lo),
            p_rx: pick(self.p_rx, file.p_rx, base.p_rx),
            p_tx: pick(self.p_tx, file.p_tx, base.p_tx),
            w: pick(self.w, file.w, base.w),
            m_payload: pick(self.m_payload, file.m_payload, base.m_payload),
            ..base
        };
        net.validate()?;
        Ok(Resolved { net, p_r_min: self.p_r_min.or(file.p_r_min) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "p_bar_t = 1.0\neta = 0.5\np_o = 0.0\nlambda = 500.0\np_t_max = 20.0\n").unwrap();
        let args = ConfigArgs { config: Some(path), lambda: Some(800.0), ..Default::default() };
        let r = args.resolve().unwrap();
        assert_eq!((r.net.lambda, r.net.p_t_max, r.net.p_lo), (800.0, 20.0, 5.0));
        assert_eq!(r.p_r_min, None);
    }

    #[test]
    fn silent_constants_are_required() {
        let args = ConfigArgs { p_bar_t: Some(1.0), eta: Some(0.5), ..Default::default() };
        let err = args.resolve().unwrap_err();
        assert!(err.to_string().contains("p_o"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "etaa = 0.5\n").unwrap();
        assert!(ConfigFile::load(&path).is_err());
    }
}
