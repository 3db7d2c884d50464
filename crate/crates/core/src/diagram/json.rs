//! JSON document form of a diagram: domain, codomain and a list of layers
//! given by box and offset. Paddings are recomputed (and type-checked) on load.

use serde::{Deserialize, Serialize};

use super::{BoxKind, Diagram, DiagramBox, DiagramError, TypeList};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub label: String,
    pub kind: BoxKind,
    pub dom: TypeList,
    pub cod: TypeList,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerDoc {
    pub offset: usize,
    #[serde(rename = "box")]
    pub boxed: BoxDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub dom: TypeList,
    pub cod: TypeList,
    pub layers: Vec<LayerDoc>,
}

impl From<Diagram> for DiagramDoc {
    fn from(d: Diagram) -> Self {
        let layers = d
            .slices()
            .map(|(offset, b)| LayerDoc {
                offset,
                boxed: BoxDoc {
                    label: b.label().to_string(),
                    kind: b.kind(),
                    dom: b.dom().clone(),
                    cod: b.cod().clone(),
                },
            })
            .collect();
        DiagramDoc {
            dom: d.dom().clone(),
            cod: d.cod().clone(),
            layers,
        }
    }
}

impl TryFrom<DiagramDoc> for Diagram {
    type Error = DiagramError;

    fn try_from(doc: DiagramDoc) -> Result<Self, Self::Error> {
        let mut slices = Vec::with_capacity(doc.layers.len());
        for l in doc.layers {
            let b = DiagramBox::from_parts(&l.boxed.label, l.boxed.kind, l.boxed.dom, l.boxed.cod)?;
            slices.push((l.offset, b));
        }
        let d = Diagram::from_slices(doc.dom, slices)?;
        if d.cod() != &doc.cod {
            return Err(DiagramError::TypeMismatch {
                expected: doc.cod,
                found: d.cod().clone(),
            });
        }
        Ok(d)
    }
}
