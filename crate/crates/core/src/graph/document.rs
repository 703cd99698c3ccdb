use serde::{Deserialize, Serialize};

use super::{GraphError, Multigraph, Result};

pub const DOCUMENT_VERSION: u32 = 1;

/// On-disk graph document.
///
/// `labels[e] = +k` means side `u -> v` of edge `e` reads `a_k`, `-k` means it reads `a_k^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i32>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Multigraph) -> Self {
        GraphDocument {
            version: DOCUMENT_VERSION,
            vertex_count: g.vertex_count(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            basepoint: None,
            labels: None,
        }
    }

    pub fn with_basepoint(mut self, basepoint: usize) -> Self {
        self.basepoint = Some(basepoint);
        self
    }

    pub fn with_labels(mut self, labels: Vec<i32>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Builds the graph and checks basepoint and label consistency.
    pub fn to_graph(&self) -> Result<Multigraph> {
        if self.version != DOCUMENT_VERSION {
            return Err(GraphError::Document(format!(
                "unsupported version {} (expected {DOCUMENT_VERSION})",
                self.version
            )));
        }
        let g = Multigraph::new(
            self.vertex_count,
            self.edges.iter().map(|&[u, v]| (u, v)).collect(),
        )?;
        if let Some(b) = self.basepoint {
            if b >= g.vertex_count() {
                return Err(GraphError::Document(format!("basepoint {b} out of range")));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != g.edge_count() {
                return Err(GraphError::Document(format!(
                    "{} labels for {} edges",
                    labels.len(),
                    g.edge_count()
                )));
            }
            if let Some(pos) = labels.iter().position(|&k| k == 0) {
                return Err(GraphError::Document(format!("label of edge {pos} is 0")));
            }
        }
        Ok(g)
    }

    /// Canonical compact JSON, newline-terminated.
    pub fn encode(&self) -> String {
        let mut text = serde_json::to_string(self).expect("graph document serializes");
        text.push('\n');
        text
    }

    pub fn decode(text: &str) -> Result<Self> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.to_graph()?;
        Ok(doc)
    }
}

impl Multigraph {
    pub fn encode(&self) -> String {
        GraphDocument::from_graph(self).encode()
    }

    pub fn decode(text: &str) -> Result<Self> {
        GraphDocument::decode(text)?.to_graph()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from the implementation's first run; any change here breaks stored documents.
    const C3_GOLDEN: &str = "{\"version\":1,\"vertex_count\":3,\"edges\":[[0,1],[1,2],[2,0]]}\n";

    #[test]
    fn golden_triangle() {
        let c3 = Multigraph::cycle(3).unwrap();
        assert_eq!(c3.encode(), C3_GOLDEN);
        assert_eq!(Multigraph::decode(C3_GOLDEN).unwrap(), c3);
    }

    #[test]
    fn round_trip_complete() {
        let k5 = Multigraph::complete(5).unwrap();
        assert_eq!(Multigraph::decode(&k5.encode()).unwrap(), k5);
    }

    #[test]
    fn optional_fields_round_trip() {
        let doc = GraphDocument::from_graph(&Multigraph::rose(2))
            .with_basepoint(0)
            .with_labels(vec![1, -2]);
        let text = doc.encode();
        assert!(text.contains("\"basepoint\":0"));
        assert_eq!(GraphDocument::decode(&text).unwrap(), doc);
    }

    #[test]
    fn truncated_document_reports_position() {
        let text = &C3_GOLDEN[..30];
        match Multigraph::decode(text) {
            Err(GraphError::Parse { line, column, .. }) => {
                assert_eq!(line, 1);
                assert!(column > 0);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let bad_edge = "{\"version\":1,\"vertex_count\":2,\"edges\":[[0,2]]}";
        assert!(matches!(
            Multigraph::decode(bad_edge),
            Err(GraphError::EndpointOutOfRange { .. })
        ));
        let bad_version = "{\"version\":2,\"vertex_count\":1,\"edges\":[]}";
        assert!(matches!(
            Multigraph::decode(bad_version),
            Err(GraphError::Document(_))
        ));
        let bad_labels = "{\"version\":1,\"vertex_count\":1,\"edges\":[[0,0]],\"labels\":[1,2]}";
        assert!(matches!(
            GraphDocument::decode(bad_labels),
            Err(GraphError::Document(_))
        ));
        let bad_base = "{\"version\":1,\"vertex_count\":1,\"edges\":[],\"basepoint\":4}";
        assert!(GraphDocument::decode(bad_base).is_err());
    }
}
