//! JSON interchange for every artifact: matrices as
//! `{"rows", "cols", "data": [[re, im], ...]}` in row-major order,
//! vectors as n x 1 matrices, and composite objects mirroring their
//! in-memory fields.

use crate::correlations::{
    BrownRep, GameDims, MatrixUnitSystemFamily, QnsCorrelation, StochasticOperatorMatrix,
};
use crate::dilation::DilationResult;
use crate::error::{Error, Result};
use crate::games::{Rule, SupportRuleGame};
use crate::graph::Graph;
use crate::quantum_graphs::{KrausFamily, SymmetricSkewSubspace};
use crate::tensor::SubspaceBasis;
use crate::{c64, CMatrix, CVec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for CMatrix {
    type Error = Error;
    fn try_from(j: &MatrixJson) -> Result<CMatrix> {
        if j.data.len() != j.rows * j.cols {
            return Err(Error::invalid(format!(
                "matrix data length {} does not match {} x {}",
                j.data.len(),
                j.rows,
                j.cols
            )));
        }
        Ok(CMatrix::new(
            j.rows,
            j.cols,
            j.data.iter().map(|&[re, im]| c64(re, im)).collect(),
        ))
    }
}

impl From<&CVec> for MatrixJson {
    fn from(v: &CVec) -> Self {
        MatrixJson::from(&v.as_column())
    }
}

pub fn vector_from_json(j: &MatrixJson) -> Result<CVec> {
    CMatrix::try_from(j)?.as_vector()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<&GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: &GraphJson) -> Result<Graph> {
        Graph::new(j.n, j.edges.iter().map(|&[u, v]| (u, v)))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleJson {
    #[serde(rename = "Q")]
    pub q: MatrixJson,
    #[serde(rename = "R")]
    pub r: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameJson {
    pub dims: [usize; 4],
    pub classical_inputs: bool,
    pub rules: Vec<RuleJson>,
}

impl From<&SupportRuleGame> for GameJson {
    fn from(g: &SupportRuleGame) -> Self {
        Self {
            dims: [g.dims.x, g.dims.y, g.dims.a, g.dims.b],
            classical_inputs: g.classical_inputs,
            rules: g
                .rules
                .iter()
                .map(|rule| RuleJson {
                    q: MatrixJson::from(&rule.q),
                    r: MatrixJson::from(&rule.r),
                })
                .collect(),
        }
    }
}

impl TryFrom<&GameJson> for SupportRuleGame {
    type Error = Error;
    fn try_from(j: &GameJson) -> Result<SupportRuleGame> {
        let dims = GameDims::new(j.dims[0], j.dims[1], j.dims[2], j.dims[3]);
        let rules = j
            .rules
            .iter()
            .map(|r| {
                Ok(Rule {
                    q: CMatrix::try_from(&r.q)?,
                    r: CMatrix::try_from(&r.r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SupportRuleGame::new(dims, rules, j.classical_inputs)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationJson {
    pub dims: [usize; 4],
    pub choi: MatrixJson,
    #[serde(default)]
    pub classical_input: bool,
}

impl From<&QnsCorrelation> for CorrelationJson {
    fn from(c: &QnsCorrelation) -> Self {
        Self {
            dims: [c.dims.x, c.dims.y, c.dims.a, c.dims.b],
            choi: MatrixJson::from(&c.choi),
            classical_input: c.classical_input,
        }
    }
}

impl TryFrom<&CorrelationJson> for QnsCorrelation {
    type Error = Error;
    fn try_from(j: &CorrelationJson) -> Result<QnsCorrelation> {
        let dims = GameDims::new(j.dims[0], j.dims[1], j.dims[2], j.dims[3]);
        let mut corr = QnsCorrelation::from_choi(dims, CMatrix::try_from(&j.choi)?)?;
        corr.classical_input = j.classical_input;
        Ok(corr)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub n: usize,
    pub basis: Vec<MatrixJson>,
}

impl From<&SymmetricSkewSubspace> for SubspaceJson {
    fn from(u: &SymmetricSkewSubspace) -> Self {
        Self {
            n: u.label_size,
            basis: u.basis.vectors.iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<&SubspaceJson> for SymmetricSkewSubspace {
    type Error = Error;
    fn try_from(j: &SubspaceJson) -> Result<SymmetricSkewSubspace> {
        let vectors = j
            .basis
            .iter()
            .map(vector_from_json)
            .collect::<Result<Vec<_>>>()?;
        let basis = SubspaceBasis::from_spanning(j.n * j.n, &vectors)?;
        SymmetricSkewSubspace::new(j.n, basis)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausJson {
    #[serde(rename = "in")]
    pub in_dim: usize,
    #[serde(rename = "out")]
    pub out_dim: usize,
    pub ops: Vec<MatrixJson>,
}

impl From<&KrausFamily> for KrausJson {
    fn from(k: &KrausFamily) -> Self {
        Self {
            in_dim: k.in_dim,
            out_dim: k.out_dim,
            ops: k.ops.iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<&KrausJson> for KrausFamily {
    type Error = Error;
    fn try_from(j: &KrausJson) -> Result<KrausFamily> {
        let ops = j
            .ops
            .iter()
            .map(CMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        KrausFamily::new(j.in_dim, j.out_dim, ops)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SomJson {
    pub x_size: usize,
    pub a_size: usize,
    pub aux_dim: usize,
    pub semi_classical: bool,
    /// Blocks in (x, x', a, a') order.
    pub blocks: Vec<MatrixJson>,
}

impl From<&StochasticOperatorMatrix> for SomJson {
    fn from(s: &StochasticOperatorMatrix) -> Self {
        Self {
            x_size: s.x_size,
            a_size: s.a_size,
            aux_dim: s.aux_dim,
            semi_classical: s.semi_classical,
            blocks: s.all_blocks().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<&SomJson> for StochasticOperatorMatrix {
    type Error = Error;
    fn try_from(j: &SomJson) -> Result<StochasticOperatorMatrix> {
        let blocks = j
            .blocks
            .iter()
            .map(CMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        StochasticOperatorMatrix::new(j.x_size, j.a_size, j.aux_dim, j.semi_classical, blocks)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MusFamilyJson {
    pub x_size: usize,
    pub a_size: usize,
    pub n: usize,
    pub systems: Vec<Vec<MatrixJson>>,
}

impl From<&MatrixUnitSystemFamily> for MusFamilyJson {
    fn from(f: &MatrixUnitSystemFamily) -> Self {
        Self {
            x_size: f.x_size,
            a_size: f.a_size,
            n: f.n,
            systems: f
                .systems
                .iter()
                .map(|sys| sys.iter().map(MatrixJson::from).collect())
                .collect(),
        }
    }
}

impl TryFrom<&MusFamilyJson> for MatrixUnitSystemFamily {
    type Error = Error;
    fn try_from(j: &MusFamilyJson) -> Result<MatrixUnitSystemFamily> {
        let systems = j
            .systems
            .iter()
            .map(|sys| {
                sys.iter()
                    .map(CMatrix::try_from)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixUnitSystemFamily::new(j.x_size, j.a_size, j.n, systems)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BrownRepJson {
    pub x_size: usize,
    pub aux_dim: usize,
    /// Blocks u_{a,x} in (a, x) order.
    pub blocks: Vec<MatrixJson>,
}

impl From<&BrownRep> for BrownRepJson {
    fn from(b: &BrownRep) -> Self {
        Self {
            x_size: b.x_size,
            aux_dim: b.aux_dim,
            blocks: b.blocks.iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<&BrownRepJson> for BrownRep {
    type Error = Error;
    fn try_from(j: &BrownRepJson) -> Result<BrownRep> {
        let blocks = j
            .blocks
            .iter()
            .map(CMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        BrownRep::new(j.x_size, j.aux_dim, blocks)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationJson {
    pub isometry: MatrixJson,
    pub systems: MusFamilyJson,
}

/// Quantum colouring bundle: the graph, the UCP blocks r_{x,a,b} in
/// (x, a, b) order, and the Kraus family of Ψ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColouringJson {
    pub graph: GraphJson,
    pub a_size: usize,
    pub aux_dim: usize,
    pub ucp_blocks: Vec<MatrixJson>,
    pub kraus: KrausJson,
}

impl From<&crate::colouring::QuantumColouring> for ColouringJson {
    fn from(c: &crate::colouring::QuantumColouring) -> Self {
        Self {
            graph: GraphJson::from(&c.graph),
            a_size: c.a_size,
            aux_dim: c.aux_dim,
            ucp_blocks: c.ucp_blocks.iter().map(MatrixJson::from).collect(),
            kraus: KrausJson::from(&c.kraus),
        }
    }
}

impl TryFrom<&ColouringJson> for crate::colouring::QuantumColouring {
    type Error = Error;
    fn try_from(j: &ColouringJson) -> Result<crate::colouring::QuantumColouring> {
        let graph = Graph::try_from(&j.graph)?;
        let blocks = j
            .ucp_blocks
            .iter()
            .map(CMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        // Rebuild through the validating constructor; the stored Kraus
        // family must reproduce the same map.
        let rebuilt =
            crate::colouring::QuantumColouring::from_blocks(graph, j.a_size, j.aux_dim, blocks)?;
        let stored = crate::quantum_graphs::KrausFamily::try_from(&j.kraus)?;
        if stored.in_dim != rebuilt.kraus.in_dim || stored.out_dim != rebuilt.kraus.out_dim {
            return Err(Error::dims(rebuilt.kraus.in_dim, stored.in_dim));
        }
        let mut out = rebuilt;
        // Cross-validate the stored family against the blocks before
        // adopting it.
        let candidate = crate::colouring::QuantumColouring {
            kraus: stored,
            ..out.clone()
        };
        candidate.cross_validate(1e-8)?;
        out = candidate;
        Ok(out)
    }
}

impl From<&DilationResult> for DilationJson {
    fn from(d: &DilationResult) -> Self {
        Self {
            isometry: MatrixJson::from(&d.isometry),
            systems: MusFamilyJson::from(&d.systems),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::sample_semiclassical_som;

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        let mut rng = crate::random::SeedRng::new(12);
        let m = rng.ginibre::<f64>(3, 4);
        let text = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        let m2 = CMatrix::try_from(&back).unwrap();
        assert_eq!(m.data, m2.data);
    }

    #[test]
    fn som_round_trip() {
        let som = sample_semiclassical_som(2, 2, 2, 77);
        let text = serde_json::to_string(&SomJson::from(&som)).unwrap();
        let back: SomJson = serde_json::from_str(&text).unwrap();
        let som2 = StochasticOperatorMatrix::try_from(&back).unwrap();
        for (a, b) in som.all_blocks().iter().zip(som2.all_blocks()) {
            assert_eq!(a.data, b.data);
        }
    }

    #[test]
    fn colouring_bundle_round_trips() {
        let rep = crate::colouring::kd2_generators(2).unwrap();
        let c = crate::colouring::QuantumColouring::from_mus_family(rep.graph.clone(), &rep.rep)
            .unwrap();
        let text = serde_json::to_string(&ColouringJson::from(&c)).unwrap();
        let back: ColouringJson = serde_json::from_str(&text).unwrap();
        let c2 = crate::colouring::QuantumColouring::try_from(&back).unwrap();
        assert_eq!(c2.a_size, c.a_size);
        assert_eq!(c2.kraus.ops.len(), c.kraus.ops.len());
        for (a, b) in c.ucp_blocks.iter().zip(c2.ucp_blocks.iter()) {
            assert_eq!(a.data, b.data);
        }
    }

    #[test]
    fn wire_format_field_names_are_stable() {
        // The shared schemas are consumed by external tooling; pin the
        // exact key names.
        let m = CMatrix::identity(1);
        let mj = serde_json::to_value(MatrixJson::from(&m)).unwrap();
        assert!(mj.get("rows").is_some() && mj.get("cols").is_some() && mj.get("data").is_some());

        let g = crate::Graph::complete(2);
        let gj = serde_json::to_value(GraphJson::from(&g)).unwrap();
        assert!(gj.get("n").is_some() && gj.get("edges").is_some());

        let game = crate::games::concurrency_game(2, 2);
        let gmj = serde_json::to_value(GameJson::from(&game)).unwrap();
        assert!(gmj.get("dims").is_some() && gmj.get("classical_inputs").is_some());
        assert!(gmj["rules"][0].get("Q").is_some() && gmj["rules"][0].get("R").is_some());

        let corr = crate::correlations::QnsCorrelation::identity_channel(2, 2);
        let cj = serde_json::to_value(CorrelationJson::from(&corr)).unwrap();
        assert!(cj.get("dims").is_some() && cj.get("choi").is_some());

        let ops = vec![CMatrix::identity(2)];
        let k = crate::quantum_graphs::KrausFamily::new(2, 2, ops).unwrap();
        let kj = serde_json::to_value(KrausJson::from(&k)).unwrap();
        assert!(kj.get("in").is_some() && kj.get("out").is_some() && kj.get("ops").is_some());

        let u = crate::quantum_graphs::SymmetricSkewSubspace::from_graph(&crate::Graph::complete(2))
            .unwrap();
        let uj = serde_json::to_value(SubspaceJson::from(&u)).unwrap();
        assert!(uj.get("n").is_some() && uj.get("basis").is_some());
    }

    #[test]
    fn malformed_matrix_is_rejected() {
        let j = MatrixJson {
            rows: 2,
            cols: 2,
            data: vec![[1.0, 0.0]],
        };
        assert!(CMatrix::try_from(&j).is_err());
    }
}
