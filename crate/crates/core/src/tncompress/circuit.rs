use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, haar_unitary, CMat};

use super::Mps;

/// Gates in layer `layer` (1-based) of a brick wall on `2 n_spatial` qubits:
/// `n` for odd layers, `n - 1` for even layers.
pub fn gate_count(n_spatial: usize, layer: usize) -> usize {
    if layer % 2 == 1 {
        n_spatial
    } else {
        n_spatial.saturating_sub(1)
    }
}

/// Zero-based qubits of gate `gate` (1-based) in layer `layer` (1-based):
/// `(2b-2, 2b-1)` for odd layers and `(2b-1, 2b)` for even layers.
pub fn gate_qubits(layer: usize, gate: usize) -> (usize, usize) {
    let q = if layer % 2 == 1 { 2 * gate - 2 } else { 2 * gate - 1 };
    (q, q + 1)
}

/// Layers of nearest-neighbour two-qubit gates in a staggered pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct BrickWallCircuit {
    n_qubits: usize,
    layers: Vec<Vec<CMat>>,
}

impl BrickWallCircuit {
    pub fn new(n_qubits: usize, layers: Vec<Vec<CMat>>) -> Result<Self> {
        if n_qubits < 2 || !n_qubits.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "brick-wall circuits need an even number of qubits, got {n_qubits}"
            )));
        }
        let n = n_qubits / 2;
        for (k, layer) in layers.iter().enumerate() {
            let expected = gate_count(n, k + 1);
            if layer.len() != expected {
                return Err(Error::Dimension(format!(
                    "layer {} has {} gates, expected {expected}",
                    k + 1,
                    layer.len()
                )));
            }
            for (b, g) in layer.iter().enumerate() {
                if g.shape() != (4, 4) {
                    return Err(Error::Dimension(format!(
                        "gate {} of layer {} is not 4x4",
                        b + 1,
                        k + 1
                    )));
                }
                linalg::ensure_unitary(g, 1e-10, &format!("gate {} of layer {}", b + 1, k + 1))?;
            }
        }
        Ok(Self { n_qubits, layers })
    }

    pub fn identity(n_spatial: usize, layers: usize) -> Self {
        let layers = (1..=layers)
            .map(|l| vec![CMat::identity(4, 4); gate_count(n_spatial, l)])
            .collect();
        Self {
            n_qubits: 2 * n_spatial,
            layers,
        }
    }

    /// Haar-random gates.
    pub fn random<R: Rng + ?Sized>(n_spatial: usize, layers: usize, rng: &mut R) -> Self {
        let layers = (1..=layers)
            .map(|l| {
                (0..gate_count(n_spatial, l))
                    .map(|_| haar_unitary(4, rng))
                    .collect()
            })
            .collect();
        Self {
            n_qubits: 2 * n_spatial,
            layers,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<CMat>] {
        &self.layers
    }

    pub fn gate_total(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub(crate) fn layer_mut(&mut self, layer: usize) -> &mut Vec<CMat> {
        &mut self.layers[layer - 1]
    }

    /// Applies layer `layer` (1-based), or its adjoint, to `mps`.
    pub fn apply_layer(&self, mps: &mut Mps, layer: usize, adjoint: bool, chi: usize) -> Result<f64> {
        let mut discarded = 0.0;
        for (b, g) in self.layers[layer - 1].iter().enumerate() {
            let (p, q) = gate_qubits(layer, b + 1);
            let g = if adjoint { g.adjoint() } else { g.clone() };
            discarded += mps.apply_gate(&g, p, q, chi)?;
        }
        Ok(discarded)
    }

    /// Applies all layers in order, first layer first.
    pub fn apply(&self, mps: &mut Mps, chi: usize) -> Result<f64> {
        if mps.n_sites() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "circuit on {} qubits applied to an MPS with {} sites",
                self.n_qubits,
                mps.n_sites()
            )));
        }
        let mut discarded = 0.0;
        for l in 1..=self.n_layers() {
            discarded += self.apply_layer(mps, l, false, chi)?;
        }
        Ok(discarded)
    }

    /// The circuit applied to `|0...0>`, with the discarded weight.
    pub fn prepare(&self, chi: usize) -> Result<(Mps, f64)> {
        let mut mps = Mps::vacuum(self.n_qubits);
        let d = self.apply(&mut mps, chi)?;
        Ok((mps, d))
    }
}
