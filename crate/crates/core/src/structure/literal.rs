use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ColoredStructure, FiniteStructure, Signature, StructureError};

/// Serialized form of a structure:
/// `{signature: [names], n, relations: {name: [[a, b], ...]}, colors?: [...]}`.
///
/// Pairs are emitted in lexicographic order; relations without pairs may be
/// omitted on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureLiteral {
    pub signature: Vec<String>,
    pub n: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u8>>,
}

impl StructureLiteral {
    pub fn to_structure(&self) -> Result<FiniteStructure, StructureError> {
        let sig = Signature::new(self.signature.iter().cloned())?;
        let mut s = FiniteStructure::new(sig.clone(), self.n)?;
        for (name, pairs) in &self.relations {
            let r = sig
                .index_of(name)
                .ok_or_else(|| StructureError::UnknownSymbol(name.clone()))?;
            for &[a, b] in pairs {
                for v in [a, b] {
                    if v >= self.n {
                        return Err(StructureError::VertexOutOfRange { vertex: v, n: self.n });
                    }
                }
                if s.has(r, a, b) {
                    return Err(StructureError::DuplicatePair(a, b, name.clone()));
                }
                s.set(r, a, b, true);
            }
        }
        Ok(s)
    }

    pub fn to_colored(&self) -> Result<ColoredStructure, StructureError> {
        let base = self.to_structure()?;
        let colors = self.colors.clone().unwrap_or_else(|| vec![1; base.n()]);
        ColoredStructure::new(base, colors)
    }
}

impl From<&FiniteStructure> for StructureLiteral {
    fn from(s: &FiniteStructure) -> Self {
        let relations = s
            .signature()
            .symbols()
            .iter()
            .enumerate()
            .map(|(r, name)| (name.clone(), s.pairs(r).into_iter().map(|(a, b)| [a, b]).collect()))
            .collect();
        StructureLiteral {
            signature: s.signature().symbols().to_vec(),
            n: s.n(),
            relations,
            colors: None,
        }
    }
}

impl From<&ColoredStructure> for StructureLiteral {
    fn from(c: &ColoredStructure) -> Self {
        let mut lit = StructureLiteral::from(c.base());
        lit.colors = Some(c.colors().to_vec());
        lit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_k2() {
        let lit: StructureLiteral = serde_json::from_str(
            r#"{"signature": ["E"], "n": 2, "relations": {"E": [[1, 0], [0, 1]]}}"#,
        )
        .unwrap();
        let s = lit.to_structure().unwrap();
        assert_eq!(s.pairs(0), vec![(0, 1), (1, 0)]);
        let back = StructureLiteral::from(&s);
        assert_eq!(back.relations["E"], vec![[0, 1], [1, 0]]);
    }

    #[test]
    fn rejects_bad_literals() {
        let unknown = StructureLiteral {
            signature: vec!["E".into()],
            n: 1,
            relations: [("F".to_string(), vec![])].into_iter().collect(),
            colors: None,
        };
        assert!(matches!(unknown.to_structure(), Err(StructureError::UnknownSymbol(_))));
        let dup = StructureLiteral {
            signature: vec!["E".into()],
            n: 2,
            relations: [("E".to_string(), vec![[0, 1], [0, 1]])].into_iter().collect(),
            colors: None,
        };
        assert!(matches!(dup.to_structure(), Err(StructureError::DuplicatePair(0, 1, _))));
        let range = StructureLiteral {
            signature: vec!["E".into()],
            n: 2,
            relations: [("E".to_string(), vec![[0, 2]])].into_iter().collect(),
            colors: None,
        };
        assert!(range.to_structure().is_err());
        assert!(serde_json::from_str::<StructureLiteral>(r#"{"signature": [], "n": 0, "x": 1}"#).is_err());
    }
}
