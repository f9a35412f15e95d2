//! Qudit computational primitives and graph states.
//!
//! A qudit graph state is built from |+⟩ vertices entangled by diagonal
//! controlled-phase gates along the edges; it is stabilized by one operator
//! per vertex, which is what [`verify_stabilizers`] checks.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::{PureState, Subsystem};
use crate::tol;

/// Local dimension of a qudit. The primitive root of unity ω = e^{2πi/d} is
/// always derived from `d`, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuditDim(usize);

impl QuditDim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn omega(self) -> C64 {
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.0 as f64)
    }

    /// ω^e with the exponent reduced mod d, so large products stay exact.
    pub fn omega_pow(self, e: i64) -> C64 {
        let d = self.0 as i64;
        let r = e.rem_euclid(d) as f64;
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r / self.0 as f64)
    }
}

/// Generalized Pauli X, the cyclic shift |0⟩⟨1| + … + |d−2⟩⟨d−1| + |d−1⟩⟨0|.
/// With Z below it satisfies XZ = ωZX, and X† raises the digit, which is the
/// direction the stabilizers need to fix graph states.
pub fn pauli_x(dim: QuditDim) -> Array2<C64> {
    let d = dim.get();
    let mut m = Array2::<C64>::zeros((d, d));
    for j in 0..d {
        m[[(j + d - 1) % d, j]] = C64::new(1.0, 0.0);
    }
    m
}

/// Generalized Pauli Z: Z|j⟩ = ω^j |j⟩.
pub fn pauli_z(dim: QuditDim) -> Array2<C64> {
    let d = dim.get();
    let mut m = Array2::<C64>::zeros((d, d));
    for j in 0..d {
        m[[j, j]] = dim.omega_pow(j as i64);
    }
    m
}

/// Two-qudit controlled-phase gate: diagonal with entry ω^{jk} at |j,k⟩.
pub fn cz_gate(dim: QuditDim) -> Array2<C64> {
    let d = dim.get();
    let mut m = Array2::<C64>::zeros((d * d, d * d));
    for j in 0..d {
        for k in 0..d {
            m[[j * d + k, j * d + k]] = dim.omega_pow((j * k) as i64);
        }
    }
    m
}

/// Undirected graph whose vertices are qudits of a common dimension.
#[derive(Debug, Clone)]
pub struct QuditGraph {
    dim: QuditDim,
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl QuditGraph {
    pub fn new<S: AsRef<str>>(dim: QuditDim, vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in names.iter().enumerate() {
            if names[..i].contains(v) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let index_of = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownEndpoint(name.to_string()))
        };
        let mut resolved: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return Err(Error::SelfLoop(a.to_string(), b.to_string()));
            }
            let (ia, ib) = (index_of(a)?, index_of(b)?);
            let pair = (ia.min(ib), ia.max(ib));
            if resolved.contains(&pair) {
                return Err(Error::DuplicateEdge(a.to_string(), b.to_string()));
            }
            resolved.push(pair);
        }
        Ok(Self {
            dim,
            vertices: names,
            edges: resolved,
        })
    }

    pub fn dim(&self) -> QuditDim {
        self.dim
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn neighbors(&self, vertex: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == vertex {
                    Some(b)
                } else if b == vertex {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn subsystems(&self) -> Vec<Subsystem> {
        self.vertices
            .iter()
            .map(|v| Subsystem::new(v.clone(), self.dim.get()))
            .collect()
    }

    fn check_cap(&self, cap: usize) -> Result<usize> {
        let d = self.dim.get() as u128;
        let mut total = 1u128;
        for _ in 0..self.vertices.len() {
            total = total.checked_mul(d).ok_or(Error::AmplitudeCapExceeded {
                required: u128::MAX,
                cap,
            })?;
            if total > cap as u128 {
                return Err(Error::AmplitudeCapExceeded {
                    required: total,
                    cap,
                });
            }
        }
        Ok(total as usize)
    }
}

/// Graph state from the closed-form amplitude d^{-n/2}·ω^{Σ_{(a,b)∈E} j_a j_b}.
pub fn build_graph_state(graph: &QuditGraph) -> Result<PureState> {
    build_graph_state_capped(graph, tol::AMPLITUDE_CAP)
}

pub fn build_graph_state_capped(graph: &QuditGraph, cap: usize) -> Result<PureState> {
    let total = graph.check_cap(cap)?;
    let n = graph.vertices().len();
    let d = graph.dim().get();
    let scale = 1.0 / (d as f64).powf(n as f64 / 2.0);

    let mut amps = Array1::<C64>::zeros(total);
    let mut digits = vec![0usize; n];
    for (flat, amp) in amps.iter_mut().enumerate() {
        let mut rem = flat;
        for s in (0..n).rev() {
            digits[s] = rem % d;
            rem /= d;
        }
        let mut exponent = 0i64;
        for &(a, b) in graph.edges() {
            exponent += (digits[a] * digits[b]) as i64;
        }
        *amp = scale * graph.dim().omega_pow(exponent);
    }
    PureState::new(graph.subsystems(), amps)
}

/// Same state assembled gate by gate: ⊗|+⟩ then one controlled-phase per edge.
/// Kept alongside the closed form as a cross-check of both constructions.
pub fn build_graph_state_by_gates(graph: &QuditGraph) -> Result<PureState> {
    graph.check_cap(tol::AMPLITUDE_CAP)?;
    let d = graph.dim().get();
    let plus = Array1::from_elem(d, C64::new(1.0 / (d as f64).sqrt(), 0.0));

    let mut state: Option<PureState> = None;
    for v in graph.vertices() {
        let site = PureState::new(vec![Subsystem::new(v.clone(), d)], plus.clone())?;
        state = Some(match state {
            None => site,
            Some(acc) => acc.tensor(&site),
        });
    }
    let mut state = state.ok_or_else(|| Error::InvalidScenario("graph has no vertices".into()))?;
    let dim = graph.dim();
    for &(a, b) in graph.edges() {
        let la = graph.vertices()[a].clone();
        let lb = graph.vertices()[b].clone();
        state = state.apply_pair_diagonal(&la, &lb, |ja, jb| dim.omega_pow((ja * jb) as i64))?;
    }
    Ok(state)
}

/// Stabilizer K_a = X_a† ∏_{(a,b)∈E} Z_b, stored structurally: applying it is
/// a digit shift on the vertex plus a phase from the neighbor digits.
#[derive(Debug, Clone)]
pub struct StabilizerOp {
    dim: QuditDim,
    vertex: usize,
    neighbors: Vec<usize>,
    labels: Vec<String>,
}

impl StabilizerOp {
    pub fn vertex_label(&self) -> &str {
        &self.labels[self.vertex]
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if state.subsystems().len() != self.labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "state has {} subsystems, stabilizer expects {}",
                state.subsystems().len(),
                self.labels.len()
            )));
        }
        let d = self.dim.get();
        for (s, l) in state.subsystems().iter().zip(&self.labels) {
            if s.dim != d || s.label != *l {
                return Err(Error::ShapeMismatch(format!(
                    "subsystem '{}' (dim {}) does not match graph vertex '{l}' (dim {d})",
                    s.label, s.dim
                )));
            }
        }
        let mut amps = Array1::<C64>::zeros(state.dim());
        for (flat, amp) in state.amplitudes().iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut digits = state.digits_of(flat);
            let mut exponent = 0i64;
            for &b in &self.neighbors {
                exponent += digits[b] as i64;
            }
            // X† raises the vertex digit by one (mod d).
            digits[self.vertex] = (digits[self.vertex] + 1) % d;
            let target = state.flat_index(&digits);
            amps[target] += self.dim.omega_pow(exponent) * amp;
        }
        PureState::new_unnormalized(state.subsystems().to_vec(), amps)
    }

    /// Dense matrix form, for small spaces and tests.
    pub fn to_matrix(&self) -> Array2<C64> {
        let d = self.dim.get();
        let total = d.pow(self.labels.len() as u32);
        let subs: Vec<Subsystem> = self
            .labels
            .iter()
            .map(|l| Subsystem::new(l.clone(), d))
            .collect();
        let mut m = Array2::<C64>::zeros((total, total));
        for col in 0..total {
            let mut amps = Array1::<C64>::zeros(total);
            amps[col] = C64::new(1.0, 0.0);
            let basis = PureState::new_unnormalized(subs.clone(), amps).unwrap();
            let out = self.apply(&basis).unwrap();
            for (row, a) in out.amplitudes().iter().enumerate() {
                m[[row, col]] = *a;
            }
        }
        m
    }
}

pub fn stabilizer(graph: &QuditGraph, vertex: &str) -> Result<StabilizerOp> {
    let v = graph.vertex_index(vertex)?;
    Ok(StabilizerOp {
        dim: graph.dim(),
        vertex: v,
        neighbors: graph.neighbors(v),
        labels: graph.vertices().to_vec(),
    })
}

/// Residual ‖K_a|Φ⟩ − |Φ⟩‖ for every vertex.
#[derive(Debug, Clone)]
pub struct StabilizerReport {
    pub residuals: Vec<(String, f64)>,
    pub tolerance: f64,
}

impl StabilizerReport {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|(_, r)| *r < self.tolerance)
    }

    pub fn worst(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

pub fn verify_stabilizers(
    graph: &QuditGraph,
    state: &PureState,
    tolerance: f64,
) -> Result<StabilizerReport> {
    let mut residuals = Vec::with_capacity(graph.vertices().len());
    for v in graph.vertices() {
        let op = stabilizer(graph, v)?;
        let mapped = op.apply(state)?;
        let mut sq = 0.0_f64;
        for (a, b) in mapped.amplitudes().iter().zip(state.amplitudes().iter()) {
            sq += (a - b).norm_sqr();
        }
        residuals.push((v.clone(), sq.sqrt()));
    }
    Ok(StabilizerReport {
        residuals,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, unitarity_error};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dimension_must_be_at_least_two() {
        assert!(QuditDim::new(1).is_err());
        assert!(QuditDim::new(2).is_ok());
    }

    #[test]
    fn qubit_pauli_x_matches() {
        let x = pauli_x(QuditDim::new(2).unwrap());
        let expect = ndarray::array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        assert!(frobenius_norm(&(&x - &expect)) < 1e-15);
    }

    #[test]
    fn qutrit_pauli_x_is_cyclic_shift() {
        let d = QuditDim::new(3).unwrap();
        let x = pauli_x(d);
        // X e_j = e_{j-1 mod 3}: each basis vector shifts one step down the
        // cycle, and X is a permutation matrix.
        for j in 0..3 {
            for i in 0..3 {
                let expect = if (i + 1) % 3 == j { 1.0 } else { 0.0 };
                assert!((x[[i, j]] - c(expect, 0.0)).norm() < 1e-15);
            }
        }
        assert!(unitarity_error(&x) < 1e-15);
    }

    #[test]
    fn qubit_pauli_z_is_diag_1_m1() {
        let z = pauli_z(QuditDim::new(2).unwrap());
        assert!((z[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z[[1, 1]] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn qutrit_pauli_z_has_root_of_unity_diagonal() {
        let d = QuditDim::new(3).unwrap();
        let z = pauli_z(d);
        for j in 0..3 {
            let expect = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 3.0);
            assert!((z[[j, j]] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn weyl_commutation_and_orders() {
        // XZ = ωZX and X^d = Z^d = I, for d = 2..6.
        for d in 2..=6 {
            let dim = QuditDim::new(d).unwrap();
            let x = pauli_x(dim);
            let z = pauli_z(dim);
            let lhs = x.dot(&z);
            let rhs = z.dot(&x).mapv(|v| v * dim.omega());
            assert!(
                frobenius_norm(&(&lhs - &rhs)) < 1e-14,
                "XZ = ωZX failed at d={d}"
            );

            let mut xp = Array2::<C64>::eye(d);
            let mut zp = Array2::<C64>::eye(d);
            for _ in 0..d {
                xp = xp.dot(&x);
                zp = zp.dot(&z);
            }
            let eye = Array2::<C64>::eye(d);
            assert!(frobenius_norm(&(&xp - &eye)) < 1e-12, "X^d != I at d={d}");
            assert!(frobenius_norm(&(&zp - &eye)) < 1e-12, "Z^d != I at d={d}");
            assert!(unitarity_error(&x) < 1e-14);
            assert!(unitarity_error(&z) < 1e-14);
        }
    }

    #[test]
    fn qubit_cz_is_diag_1_1_1_m1() {
        let s = cz_gate(QuditDim::new(2).unwrap());
        let expect = [1.0, 1.0, 1.0, -1.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((s[[i, i]] - c(*e, 0.0)).norm() < 1e-15);
        }
        // Applying it twice gives the identity.
        let twice = s.dot(&s);
        assert!(frobenius_norm(&(&twice - &Array2::<C64>::eye(4))) < 1e-14);
    }

    #[test]
    fn qutrit_cz_entry_wraps_mod_d() {
        let d = QuditDim::new(3).unwrap();
        let s = cz_gate(d);
        // entry at (j,k) = (2,2): ω^4 = ω.
        let idx = 2 * 3 + 2;
        assert!((s[[idx, idx]] - d.omega()).norm() < 1e-14);
        assert!(unitarity_error(&s) < 1e-14);
        // Symmetric under swapping the two subsystems.
        for j in 0..3 {
            for k in 0..3 {
                assert!((s[[j * 3 + k, j * 3 + k]] - s[[k * 3 + j, k * 3 + j]]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn graph_validation_errors() {
        let d = QuditDim::new(2).unwrap();
        assert!(matches!(
            QuditGraph::new(d, &["a"], &[("a", "a")]),
            Err(Error::SelfLoop(_, _))
        ));
        assert!(matches!(
            QuditGraph::new(d, &["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::DuplicateEdge(_, _))
        ));
        assert!(matches!(
            QuditGraph::new(d, &["a"], &[("a", "b")]),
            Err(Error::UnknownEndpoint(_))
        ));
        assert!(matches!(
            QuditGraph::new(d, &["a", "a"], &[]),
            Err(Error::DuplicateVertex(_))
        ));
    }

    #[test]
    fn single_vertex_graph_state_is_plus() {
        let d = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(d, &["a"], &[]).unwrap();
        let st = build_graph_state(&g).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((st.amplitudes()[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((st.amplitudes()[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_qubit_graph_state_amplitudes() {
        let d = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(d, &["a", "b"], &[("a", "b")]).unwrap();
        let st = build_graph_state(&g).unwrap();
        let expect = [0.5, 0.5, 0.5, -0.5];
        for (i, e) in expect.iter().enumerate() {
            assert!((st.amplitudes()[i] - c(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn qutrit_pair_amplitude_is_omega_jk_over_d() {
        let d = QuditDim::new(3).unwrap();
        let g = QuditGraph::new(d, &["a", "b"], &[("a", "b")]).unwrap();
        let st = build_graph_state(&g).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let expect = d.omega_pow((j * k) as i64) / 3.0;
                assert!((st.amplitudes()[j as usize * 3 + k as usize] - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn closed_form_matches_gate_by_gate() {
        for (d, vertices, edges) in [
            (2, vec!["a", "b", "c"], vec![("a", "b"), ("b", "c")]),
            (
                3,
                vec!["a", "b", "c", "e"],
                vec![("a", "b"), ("b", "c"), ("c", "e"), ("a", "e")],
            ),
            (4, vec!["a", "b"], vec![("a", "b")]),
        ] {
            let dim = QuditDim::new(d).unwrap();
            let g = QuditGraph::new(dim, &vertices, &edges).unwrap();
            let closed = build_graph_state(&g).unwrap();
            let gated = build_graph_state_by_gates(&g).unwrap();
            let mut diff = 0.0_f64;
            for (a, b) in closed.amplitudes().iter().zip(gated.amplitudes().iter()) {
                diff += (a - b).norm_sqr();
            }
            assert!(diff.sqrt() < 1e-12, "constructions disagree at d={d}");
        }
    }

    #[test]
    fn isolated_vertex_stabilizer_is_x() {
        let d = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(d, &["a"], &[]).unwrap();
        let op = stabilizer(&g, "a").unwrap();
        let m = op.to_matrix();
        let x = pauli_x(d);
        assert!(frobenius_norm(&(&m - &x)) < 1e-14);
    }

    #[test]
    fn qutrit_edge_stabilizer_is_xdag_kron_z() {
        let d = QuditDim::new(3).unwrap();
        let g = QuditGraph::new(d, &["a", "b"], &[("a", "b")]).unwrap();
        let op = stabilizer(&g, "a").unwrap();
        let m = op.to_matrix();
        let xdag = crate::linalg::adjoint(&pauli_x(d));
        let z = pauli_z(d);
        // kron(X†, Z) in the row-major subsystem convention.
        let mut expect = Array2::<C64>::zeros((9, 9));
        for i1 in 0..3 {
            for j1 in 0..3 {
                for i2 in 0..3 {
                    for j2 in 0..3 {
                        expect[[i1 * 3 + i2, j1 * 3 + j2]] = xdag[[i1, j1]] * z[[i2, j2]];
                    }
                }
            }
        }
        assert!(frobenius_norm(&(&m - &expect)) < 1e-14);
        assert!(unitarity_error(&m) < 1e-12);
    }

    #[test]
    fn unknown_vertex_is_an_error() {
        let d = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(d, &["a"], &[]).unwrap();
        assert!(matches!(stabilizer(&g, "zz"), Err(Error::UnknownVertex(_))));
    }

    // Dense kron-chain oracle: I ⊗ … ⊗ X† ⊗ … with Z at the neighbors,
    // assembled from the single-site matrices with no shared code with
    // StabilizerOp.
    fn stabilizer_matrix_oracle(g: &QuditGraph, vertex: usize) -> Array2<C64> {
        let d = g.dim().get();
        let neighbors = g.neighbors(vertex);
        let mut acc = Array2::<C64>::eye(1);
        for site in 0..g.vertices().len() {
            let factor = if site == vertex {
                crate::linalg::adjoint(&pauli_x(g.dim()))
            } else if neighbors.contains(&site) {
                pauli_z(g.dim())
            } else {
                Array2::<C64>::eye(d)
            };
            let (ra, ca) = (acc.nrows(), acc.ncols());
            let mut next = Array2::<C64>::zeros((ra * d, ca * d));
            for i in 0..ra {
                for j in 0..ca {
                    for p in 0..d {
                        for q in 0..d {
                            next[[i * d + p, j * d + q]] = acc[[i, j]] * factor[[p, q]];
                        }
                    }
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn stabilizer_matches_dense_kron_oracle() {
        for (d, vertices, edges) in [
            (2, vec!["a", "b", "c"], vec![("a", "b"), ("b", "c")]),
            (3, vec!["a", "b", "c"], vec![("a", "c")]),
        ] {
            let dim = QuditDim::new(d).unwrap();
            let g = QuditGraph::new(dim, &vertices, &edges).unwrap();
            for (v, name) in g.vertices().to_vec().iter().enumerate() {
                let sparse = stabilizer(&g, name).unwrap().to_matrix();
                let dense = stabilizer_matrix_oracle(&g, v);
                assert!(
                    frobenius_norm(&(&sparse - &dense)) < 1e-13,
                    "vertex {name} at d={d}"
                );
            }
        }
    }

    #[test]
    fn path_graph_stabilizers_fix_the_state() {
        // 4-vertex path at d = 3.
        let d = QuditDim::new(3).unwrap();
        let g = QuditGraph::new(
            d,
            &["v1", "v2", "v3", "v4"],
            &[("v1", "v2"), ("v2", "v3"), ("v3", "v4")],
        )
        .unwrap();
        let st = build_graph_state(&g).unwrap();
        let report = verify_stabilizers(&g, &st, 1e-12).unwrap();
        assert_eq!(report.residuals.len(), 4);
        assert!(report.pass(), "worst residual {}", report.worst());
    }

    #[test]
    fn qubit_path_of_three_verifies() {
        let d = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(d, &["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let st = build_graph_state(&g).unwrap();
        let report = verify_stabilizers(&g, &st, 1e-12).unwrap();
        assert_eq!(report.residuals.len(), 3);
        assert!(report.pass());
    }

    #[test]
    fn corrupted_state_fails_verification() {
        let d = QuditDim::new(2).unwrap();
        let g = QuditGraph::new(d, &["a", "b"], &[("a", "b")]).unwrap();
        let st = build_graph_state(&g).unwrap();
        let mut amps = st.amplitudes().clone();
        amps[3] = -amps[3]; // flip one sign
        let bad = PureState::new(st.subsystems().to_vec(), amps).unwrap();
        let report = verify_stabilizers(&g, &bad, 1e-12).unwrap();
        assert!(!report.pass());
        assert!(report.worst() > 0.1, "worst residual {}", report.worst());
    }

    #[test]
    fn large_graph_state_stays_normalized() {
        // Half a million qutrit amplitudes: the norm check must not drift.
        let d = QuditDim::new(3).unwrap();
        let names: Vec<String> = (0..12).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> = (0..11)
            .map(|i| (format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        let g = QuditGraph::new(d, &names, &edges).unwrap();
        let st = build_graph_state(&g).unwrap();
        assert!((st.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn amplitude_cap_guard() {
        let d = QuditDim::new(4).unwrap();
        let names: Vec<String> = (0..14).map(|i| format!("v{i}")).collect();
        let g = QuditGraph::new(d, &names, &[]).unwrap();
        // 4^14 = 2^28 exceeds the default cap of 2^24.
        assert!(matches!(
            build_graph_state(&g),
            Err(Error::AmplitudeCapExceeded { .. })
        ));
    }
}
