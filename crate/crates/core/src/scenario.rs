//! Declarative description of a fusion experiment: the input clusters with
//! their chosen legs, ancilla photons, and vacuum padding. Lowering a scenario
//! produces the [`FusionInput`] list and channel layout everything else runs on.

use ndarray::{array, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{ChannelLayout, Interferometer};
use crate::fusion::{layout_for_inputs, AncillaInput, ClusterInput, FusionInput};
use crate::graphstate::{build_graph_state, QuditDim, QuditGraph};

/// A cluster participating in the fusion: its graph and the measured vertex.
#[derive(Debug, Clone)]
pub struct ClusterSpec {
    pub graph: QuditGraph,
    pub leg: String,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub dim: QuditDim,
    pub clusters: Vec<ClusterSpec>,
    pub ancillae: Vec<AncillaInput>,
    pub vacuum_pads: usize,
}

impl Scenario {
    /// The canonical benchmark scenario: two maximally entangled d-qudit
    /// pairs (single-edge graph states, measuring the second vertex), plus
    /// `ancillae` ground-state ancilla photons.
    pub fn bell_pairs(d: usize, ancillae: usize, vacuum_pads: usize) -> Result<Self> {
        let dim = QuditDim::new(d)?;
        let mut clusters = Vec::with_capacity(2);
        for name in ["c1", "c2"] {
            let rest = format!("{name}.rest");
            let leg = format!("{name}.leg");
            let graph = QuditGraph::new(dim, &[rest.clone(), leg.clone()], &[(rest, leg.clone())])?;
            clusters.push(ClusterSpec { graph, leg });
        }
        Ok(Self {
            dim,
            clusters,
            ancillae: (0..ancillae).map(|_| AncillaInput::ground(d)).collect(),
            vacuum_pads,
        })
    }

    pub fn build_inputs(&self) -> Result<Vec<FusionInput>> {
        let mut inputs = Vec::with_capacity(self.clusters.len() + self.ancillae.len());
        for spec in &self.clusters {
            let state = build_graph_state(&spec.graph)?;
            inputs.push(FusionInput::Cluster(ClusterInput::new(
                state,
                spec.leg.clone(),
            )?));
        }
        for anc in &self.ancillae {
            if anc.leg_state.len() != self.dim.get() {
                return Err(Error::InvalidScenario(format!(
                    "ancilla state has {} modes, expected d = {}",
                    anc.leg_state.len(),
                    self.dim.get()
                )));
            }
            inputs.push(FusionInput::Ancilla(anc.clone()));
        }
        if inputs.is_empty() {
            return Err(Error::InvalidScenario("scenario has no inputs".into()));
        }
        Ok(inputs)
    }

    pub fn layout(&self) -> Result<ChannelLayout> {
        Ok(layout_for_inputs(&self.build_inputs()?, self.vacuum_pads))
    }

    /// Total interferometer modes: Σ k_m + vacuum pads.
    pub fn modes(&self) -> Result<usize> {
        Ok(self.layout()?.total_modes())
    }

    pub fn interferometer(&self, matrix: Array2<C64>) -> Result<Interferometer> {
        Interferometer::new(matrix, self.layout()?)
    }
}

/// Name of the diagonal-beam-splitter network of the standard qubit fusion
/// gate, accepted wherever a unitary source is configured.
pub const PRESET_QUBIT_TYPE2_EQ8: &str = "qubit-type2-eq8";

/// Look up a named preset unitary.
pub fn preset_unitary(name: &str) -> Option<Array2<C64>> {
    match name {
        PRESET_QUBIT_TYPE2_EQ8 => {
            let h = C64::new(0.5, 0.0);
            Some(array![
                [h, h, h, -h],
                [h, h, -h, h],
                [h, -h, h, h],
                [-h, h, h, h]
            ])
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_error;

    #[test]
    fn bell_pair_scenario_shapes() {
        let s = Scenario::bell_pairs(3, 1, 2).unwrap();
        let inputs = s.build_inputs().unwrap();
        assert_eq!(inputs.len(), 3);
        assert_eq!(inputs[0].rank(), 3);
        assert_eq!(inputs[2].rank(), 1);
        assert_eq!(s.modes().unwrap(), 3 + 3 + 1 + 2);
    }

    #[test]
    fn preset_is_unitary_and_named() {
        let u = preset_unitary(PRESET_QUBIT_TYPE2_EQ8).unwrap();
        assert!(unitarity_error(&u) < 1e-15);
        assert!(preset_unitary("no-such-preset").is_none());
    }

    #[test]
    fn ancilla_dimension_is_validated() {
        let mut s = Scenario::bell_pairs(3, 0, 0).unwrap();
        s.ancillae.push(AncillaInput::ground(2));
        assert!(matches!(s.build_inputs(), Err(Error::InvalidScenario(_))));
    }
}
