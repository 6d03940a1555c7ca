use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Static description of an ensemble of `n` coupled spin-½ nuclei.
///
/// Spin 1 is the most significant qubit of the computational basis and `|0⟩`
/// is the low-energy state. Polarizations are in units of the symbolic
/// thermal scale ε, so the ¹³C spin of chloroform has polarization 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSystem {
    pub name: String,
    pub n: usize,
    /// Gyromagnetic weights relative to the reference spin.
    pub gamma: Vec<f64>,
    /// Symmetric scalar-coupling matrix in Hz, zero diagonal.
    pub j_coupling: Vec<Vec<f64>>,
    pub polarization: Vec<f64>,
    /// Longitudinal relaxation times in seconds (`inf` allowed).
    pub t1: Vec<f64>,
    /// Transverse relaxation times in seconds (`inf` allowed).
    pub t2: Vec<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
struct SystemFile {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    gamma: Vec<f64>,
    j_coupling: Vec<Vec<f64>>,
    polarization: Vec<f64>,
    relaxation: RelaxationTable,
}

#[derive(Debug, Deserialize, Serialize)]
struct RelaxationTable {
    t1: Vec<f64>,
    t2: Vec<f64>,
}

impl SpinSystem {
    pub fn new(
        name: impl Into<String>,
        gamma: Vec<f64>,
        j_coupling: Vec<Vec<f64>>,
        polarization: Vec<f64>,
        t1: Vec<f64>,
        t2: Vec<f64>,
    ) -> Result<Self> {
        let system = Self { name: name.into(), n: gamma.len(), gamma, j_coupling, polarization, t1, t2 };
        system.validate()?;
        Ok(system)
    }

    /// Uncoupled, non-relaxing system with unit weights and polarizations.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(
            format!("uniform{n}"),
            vec![1.0; n],
            vec![vec![0.0; n]; n],
            vec![1.0; n],
            vec![f64::INFINITY; n],
            vec![f64::INFINITY; n],
        )
    }

    /// ¹³C-labelled chloroform: carbon is spin 1, proton is spin 2, γ_H/γ_C = 4.
    ///
    /// The relaxation times are placeholders; override them for quantitative work.
    pub fn chcl3() -> Self {
        let j = 214.5;
        Self::new(
            "chcl3",
            vec![1.0, 4.0],
            vec![vec![0.0, j], vec![j, 0.0]],
            vec![1.0, 1.0],
            vec![18.0, 5.0],
            vec![0.3, 0.8],
        )
        .expect("preset is valid")
    }

    /// ¹³C₃-alanine, three homonuclear carbons. Relaxation times are placeholders.
    pub fn alanine() -> Self {
        let (j12, j23, j13) = (53.97, 34.9, -1.31);
        Self::new(
            "alanine",
            vec![1.0, 1.0, 1.0],
            vec![vec![0.0, j12, j13], vec![j12, 0.0, j23], vec![j13, j23, 0.0]],
            vec![1.0, 1.0, 1.0],
            vec![2.0, 2.0, 2.0],
            vec![0.5, 0.5, 0.5],
        )
        .expect("preset is valid")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "chcl3" => Some(Self::chcl3()),
            "alanine" => Some(Self::alanine()),
            _ => None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: SystemFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if file.gamma.len() != file.n {
            return Err(Error::InvalidSystem(format!("n = {} but gamma has {} entries", file.n, file.gamma.len())));
        }
        Self::new(
            file.name.unwrap_or_else(|| "custom".to_string()),
            file.gamma,
            file.j_coupling,
            file.polarization,
            file.relaxation.t1,
            file.relaxation.t2,
        )
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    /// A preset name or a path to a TOML system file.
    pub fn load(preset_or_path: &str) -> Result<Self> {
        match Self::preset(preset_or_path) {
            Some(s) => Ok(s),
            None => Self::from_file(preset_or_path),
        }
    }

    pub fn to_toml_string(&self) -> String {
        let file = SystemFile {
            name: Some(self.name.clone()),
            n: self.n,
            gamma: self.gamma.clone(),
            j_coupling: self.j_coupling.clone(),
            polarization: self.polarization.clone(),
            relaxation: RelaxationTable { t1: self.t1.clone(), t2: self.t2.clone() },
        };
        toml::to_string(&file).expect("system serializes")
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.j_coupling[i][j]
    }

    pub fn with_relaxation(mut self, t1: Vec<f64>, t2: Vec<f64>) -> Result<Self> {
        self.t1 = t1;
        self.t2 = t2;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::InvalidSystem(msg));
        if n == 0 {
            return bad("spin count must be at least 1".into());
        }
        for (name, len) in [
            ("gamma", self.gamma.len()),
            ("polarization", self.polarization.len()),
            ("t1", self.t1.len()),
            ("t2", self.t2.len()),
            ("j_coupling", self.j_coupling.len()),
        ] {
            if len != n {
                return bad(format!("{name} has {len} entries, expected {n}"));
            }
        }
        for (i, row) in self.j_coupling.iter().enumerate() {
            if row.len() != n {
                return bad(format!("j_coupling row {i} has {} entries, expected {n}", row.len()));
            }
            if row[i] != 0.0 {
                return bad(format!("j_coupling diagonal entry {i} is nonzero"));
            }
            for (j, &v) in row.iter().enumerate() {
                if (v - self.j_coupling[j][i]).abs() > 1e-12 {
                    return bad(format!("j_coupling is not symmetric at ({i}, {j})"));
                }
            }
        }
        if let Some(p) = self.polarization.iter().find(|&&p| !(p > 0.0)) {
            return bad(format!("polarization entries must be positive, found {p}"));
        }
        for i in 0..n {
            let (t1, t2) = (self.t1[i], self.t2[i]);
            if !(t1 > 0.0) || !(t2 > 0.0) {
                return bad(format!("relaxation times of spin {} must be positive", i + 1));
            }
            if t2 > 2.0 * t1 {
                return bad(format!("spin {}: T2 = {t2} exceeds 2·T1 = {}", i + 1, 2.0 * t1));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        assert_eq!(SpinSystem::chcl3().dim(), 4);
        assert_eq!(SpinSystem::alanine().coupling(0, 2), -1.31);
        assert!(SpinSystem::preset("nope").is_none());
    }

    #[test]
    fn toml_round_trip() {
        let s = SpinSystem::alanine();
        let back = SpinSystem::from_toml_str(&s.to_toml_string()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn parses_infinite_relaxation() {
        let text = r#"
n = 1
gamma = [1.0]
j_coupling = [[0.0]]
polarization = [1.0]

[relaxation]
t1 = [inf]
t2 = [inf]
"#;
        let s = SpinSystem::from_toml_str(text).unwrap();
        assert!(s.t1[0].is_infinite());
    }

    #[test]
    fn rejects_invalid_systems() {
        let asym = SpinSystem::new("x", vec![1.0, 1.0], vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![1.0; 2], vec![1.0; 2], vec![1.0; 2]);
        assert!(matches!(asym, Err(Error::InvalidSystem(_))));
        let t2_long = SpinSystem::new("x", vec![1.0], vec![vec![0.0]], vec![1.0], vec![1.0], vec![2.5]);
        assert!(matches!(t2_long, Err(Error::InvalidSystem(_))));
        let neg_pol = SpinSystem::new("x", vec![1.0], vec![vec![0.0]], vec![-1.0], vec![1.0], vec![1.0]);
        assert!(neg_pol.is_err());
        assert!(SpinSystem::uniform(0).is_err());
    }
}
