use graph_core::{MultiplexGraph, NodeTypeId};

use crate::{Result, WalkError};

/// An ordered node-type sequence constraining walk transitions.
///
/// Positions beyond the schema length cycle back to the second type, so a
/// schema `A -> B -> A` continues `B, A, B, ...` for longer walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetapathSchema {
    types: Vec<NodeTypeId>,
}

impl MetapathSchema {
    pub fn new(types: Vec<NodeTypeId>) -> Result<Self> {
        if types.len() < 2 {
            return Err(WalkError::SchemaTooShort);
        }
        Ok(MetapathSchema { types })
    }

    pub fn from_names(graph: &MultiplexGraph, names: &[&str]) -> Result<Self> {
        let mut types = Vec::with_capacity(names.len());
        for name in names {
            let t = graph
                .node_type_names()
                .iter()
                .position(|n| n == name)
                .ok_or(WalkError::SchemaUnknownType(
                    u16::MAX,
                    graph.node_type_count(),
                ))?;
            types.push(t as NodeTypeId);
        }
        Self::new(types)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start_type(&self) -> NodeTypeId {
        self.types[0]
    }

    /// Node type required at 0-based walk position `pos`.
    pub fn type_at(&self, pos: usize) -> NodeTypeId {
        let l = self.types.len();
        if pos < l {
            self.types[pos]
        } else {
            self.types[(pos - l) % (l - 1) + 1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycling_restarts_from_second_type() {
        let schema = MetapathSchema::new(vec![0, 1, 2]).unwrap();
        let positions: Vec<u16> = (0..8).map(|p| schema.type_at(p)).collect();
        assert_eq!(positions, vec![0, 1, 2, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn short_schema_is_rejected() {
        assert!(matches!(
            MetapathSchema::new(vec![0]),
            Err(WalkError::SchemaTooShort)
        ));
    }
}
