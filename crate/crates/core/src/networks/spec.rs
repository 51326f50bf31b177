use std::f64::consts::PI;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ansatz family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    /// Feedforward network of sigmoid quantum perceptrons.
    Sqp,
    /// Feedforward network of canonical two-qubit gates.
    Hannover,
    /// Hardware-efficient ansatz: Ry layers and CNOT entanglers on one register.
    Hea,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Sqp, Family::Hannover, Family::Hea];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sqp => "SQP",
            Family::Hannover => "HANNOVER",
            Family::Hea => "HEA",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FeatureMap {
    /// Angle encoding, `Ry(x_j)` on qubit `j`.
    #[default]
    Easy,
    /// Two rounds of Hadamards and an entangling diagonal phase layer.
    Hard,
    /// Quantum data is fed in directly.
    None,
}

impl FeatureMap {
    pub fn name(self) -> &'static str {
        match self {
            FeatureMap::Easy => "EASY",
            FeatureMap::Hard => "HARD",
            FeatureMap::None => "NONE",
        }
    }
}

/// Sign choice for the lower row of the perceptron block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SignVariant {
    /// Adiabatic-ramp form `[[√(1−f), √f], [√f, −√(1−f)]]`.
    #[default]
    Plus,
    /// Repeat-until-success form `[[√(1−f), √f], [−√f, √(1−f)]]`.
    Minus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Entangler {
    #[default]
    Cnot,
    Cz,
}

/// How model outputs are read from the output register. `qubits` index the
/// output register; `None` means all of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "SCREAMING_SNAKE_CASE", deny_unknown_fields)]
pub enum Readout {
    /// `P(qubit = 1)` for each listed qubit.
    ClassProbe {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qubits: Option<Vec<usize>>,
    },
    /// Joint computational-basis distribution of the listed qubits.
    Distribution {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qubits: Option<Vec<usize>>,
    },
}

impl Default for Readout {
    fn default() -> Self {
        Readout::ClassProbe { qubits: None }
    }
}

impl Readout {
    pub fn class_probe(qubits: Vec<usize>) -> Self {
        Readout::ClassProbe { qubits: Some(qubits) }
    }

    pub fn distribution_all() -> Self {
        Readout::Distribution { qubits: None }
    }

    pub fn qubits(&self, output_width: usize) -> Vec<usize> {
        let q = match self {
            Readout::ClassProbe { qubits } | Readout::Distribution { qubits } => qubits,
        };
        q.clone().unwrap_or_else(|| (0..output_width).collect())
    }

    /// Length of the model output vector.
    pub fn output_len(&self, output_width: usize) -> usize {
        let k = self.qubits(output_width).len();
        match self {
            Readout::ClassProbe { .. } => k,
            Readout::Distribution { .. } => 1 << k,
        }
    }
}

fn default_hea_layers() -> usize {
    1
}

/// Network description. For the feedforward families `layer_widths` is
/// `[N_in, hidden…, N_out]`; for HEA it is `[n_qubits]` and the depth is
/// `hea_layers`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub family: Family,
    pub layer_widths: Vec<usize>,
    #[serde(default = "default_hea_layers")]
    pub hea_layers: usize,
    #[serde(default)]
    pub feature_map: FeatureMap,
    #[serde(default)]
    pub readout: Readout,
    #[serde(default)]
    pub sign: SignVariant,
    #[serde(default)]
    pub entangler: Entangler,
}

impl NetworkSpec {
    pub fn sqp(layer_widths: Vec<usize>) -> Self {
        Self::feedforward(Family::Sqp, layer_widths)
    }

    pub fn hannover(layer_widths: Vec<usize>) -> Self {
        Self::feedforward(Family::Hannover, layer_widths)
    }

    pub fn hea(n_qubits: usize, layers: usize) -> Self {
        Self {
            family: Family::Hea,
            layer_widths: vec![n_qubits],
            hea_layers: layers,
            feature_map: FeatureMap::Easy,
            readout: Readout::default(),
            sign: SignVariant::Plus,
            entangler: Entangler::Cnot,
        }
    }

    fn feedforward(family: Family, layer_widths: Vec<usize>) -> Self {
        Self {
            family,
            layer_widths,
            hea_layers: 1,
            feature_map: FeatureMap::Easy,
            readout: Readout::default(),
            sign: SignVariant::Plus,
            entangler: Entangler::Cnot,
        }
    }

    pub fn with_feature_map(mut self, fm: FeatureMap) -> Self {
        self.feature_map = fm;
        self
    }

    pub fn with_readout(mut self, readout: Readout) -> Self {
        self.readout = readout;
        self
    }

    pub fn with_sign(mut self, sign: SignVariant) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_entangler(mut self, e: Entangler) -> Self {
        self.entangler = e;
        self
    }

    pub fn is_feedforward(&self) -> bool {
        self.family != Family::Hea
    }

    pub fn input_width(&self) -> usize {
        self.layer_widths[0]
    }

    pub fn output_width(&self) -> usize {
        *self.layer_widths.last().expect("validated spec has layers")
    }

    /// Number of layer-to-layer transitions (HEA: number of layers).
    pub fn n_stages(&self) -> usize {
        match self.family {
            Family::Hea => self.hea_layers,
            _ => self.layer_widths.len() - 1,
        }
    }

    /// Largest register touched at once by the forward pass.
    pub fn max_register(&self) -> usize {
        match self.family {
            Family::Hea => self.layer_widths[0],
            _ => self.layer_widths.windows(2).map(|w| w[0] + w[1]).max().unwrap_or(0),
        }
    }

    /// Parameters owned by each stage, in layout order.
    pub fn stage_param_counts(&self) -> Vec<usize> {
        match self.family {
            Family::Sqp => self.layer_widths.windows(2).map(|w| w[1] * (w[0] + 1)).collect(),
            Family::Hannover => self.layer_widths.windows(2).map(|w| 3 * w[0] * w[1]).collect(),
            Family::Hea => vec![self.layer_widths[0]; self.hea_layers],
        }
    }

    pub fn stage_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.stage_param_counts()
            .into_iter()
            .map(|n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.stage_param_counts().iter().sum()
    }

    /// Sampling/initialization interval for every parameter: perceptron
    /// weights and biases in `[−5, 5]`, rotation angles in `[0, 2π)`.
    pub fn param_bounds(&self) -> Vec<(f64, f64)> {
        let b = match self.family {
            Family::Sqp => (-5.0, 5.0),
            _ => (0.0, 2.0 * PI),
        };
        vec![b; self.param_count()]
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidNetwork(m.to_string()));
        if self.layer_widths.iter().any(|&w| w == 0) {
            return bad("layer widths must be at least 1");
        }
        match self.family {
            Family::Hea => {
                if self.layer_widths.len() != 1 {
                    return bad("HEA takes a single register width");
                }
                if self.hea_layers == 0 {
                    return bad("HEA needs at least one layer");
                }
            }
            _ => {
                if self.layer_widths.len() < 2 {
                    return bad("feedforward networks need input and output layers");
                }
            }
        }
        if self.max_register() > 16 {
            return bad("register too large for dense simulation");
        }
        let out = self.output_width();
        let q = self.readout.qubits(out);
        if q.is_empty() {
            return bad("readout selects no qubits");
        }
        let mut seen = vec![false; out];
        for &i in &q {
            if i >= out || seen[i] {
                return bad("readout qubits must be distinct output-register indices");
            }
            seen[i] = true;
        }
        if self.param_count() == 0 {
            return bad("network has no parameters");
        }
        Ok(())
    }

    /// Short identifier, e.g. `SQP[4-4-4-3]` or `HEA[4x32]`.
    pub fn id(&self) -> String {
        let w: Vec<String> = self.layer_widths.iter().map(|w| w.to_string()).collect();
        match self.family {
            Family::Hea => format!("HEA[{}x{}]", self.layer_widths[0], self.hea_layers),
            f => format!("{}[{}]", f.name(), w.join("-")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_counts() {
        assert_eq!(NetworkSpec::sqp(vec![1, 1]).param_count(), 2);
        assert_eq!(NetworkSpec::hannover(vec![2, 2]).param_count(), 12);
        assert_eq!(NetworkSpec::hea(4, 32).param_count(), 128);
        assert_eq!(NetworkSpec::sqp(vec![4, 4, 4, 3]).param_count(), 20 + 20 + 15);
        assert_eq!(NetworkSpec::hannover(vec![2, 3, 3, 2]).param_count(), 3 * (6 + 9 + 6));
    }

    #[test]
    fn stage_ranges_tile_the_vector() {
        let s = NetworkSpec::sqp(vec![2, 3, 1]);
        assert_eq!(s.stage_ranges(), vec![0..9, 9..13]);
    }

    #[test]
    fn validation() {
        assert!(NetworkSpec::sqp(vec![4]).validate().is_err());
        assert!(NetworkSpec::sqp(vec![2, 0]).validate().is_err());
        assert!(NetworkSpec::hea(2, 0).validate().is_err());
        assert!(NetworkSpec::hea(3, 2)
            .with_readout(Readout::class_probe(vec![3]))
            .validate()
            .is_err());
        assert!(NetworkSpec::hea(3, 2)
            .with_readout(Readout::class_probe(vec![0, 2]))
            .validate()
            .is_ok());
    }

    #[test]
    fn json_shape() {
        let s: NetworkSpec = serde_json::from_str(r#"{"family":"SQP","layer_widths":[4,4,4,3]}"#).unwrap();
        assert_eq!(s, NetworkSpec::sqp(vec![4, 4, 4, 3]));
        let r: Readout = serde_json::from_str(r#"{"mode":"DISTRIBUTION","qubits":[0]}"#).unwrap();
        assert_eq!(r.output_len(2), 2);
        assert!(serde_json::from_str::<NetworkSpec>(r#"{"family":"SQP","layer_widths":[1,1],"depth":3}"#).is_err());
    }
}
