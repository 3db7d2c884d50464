//! Typed monoidal string diagrams.
//!
//! A [`Diagram`] is a list of layers; each layer applies one [`DiagramBox`] to a
//! contiguous block of wires, with identity wires padding it on either side.
//! Diagrams are immutable: every operation returns a fresh value, and the only
//! way to build one is through operations that type-check their inputs.

mod json;
mod normal;
mod types;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use json::{DiagramDoc, LayerDoc};
pub use normal::{interchanges, normal_form, yank};
pub use types::{types, BasicType, TypeList};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: TypeList, found: TypeList },

    #[error("box {label:?} at offset {offset} does not fit on wires {wires}")]
    BadOffset { label: String, offset: usize, wires: TypeList },

    #[error("invalid type literal {0:?}")]
    BadType(String),

    #[error("invalid box {label:?}: {reason}")]
    BadBox { label: String, reason: String },
}

/// Which adjoint a cup or cap pairs the type with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `tˡ · t → 1` for cups, `1 → t · tˡ` for caps.
    Left,
    /// `t · tʳ → 1` for cups, `1 → tʳ · t` for caps.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxKind {
    Word,
    Cup,
    Cap,
    Wire,
    Swap,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramBox {
    label: String,
    dom: TypeList,
    cod: TypeList,
    kind: BoxKind,
}

impl DiagramBox {
    /// A word state `1 → cod`.
    pub fn word(label: &str, cod: TypeList) -> Self {
        Self {
            label: label.to_string(),
            dom: TypeList::unit(),
            cod,
            kind: BoxKind::Word,
        }
    }

    pub fn cup(t: &BasicType, side: Side) -> Self {
        let dom = match side {
            Side::Right => TypeList::new(vec![t.clone(), t.r()]),
            Side::Left => TypeList::new(vec![t.l(), t.clone()]),
        };
        Self {
            label: "cup".into(),
            dom,
            cod: TypeList::unit(),
            kind: BoxKind::Cup,
        }
    }

    pub fn cap(t: &BasicType, side: Side) -> Self {
        let cod = match side {
            Side::Right => TypeList::new(vec![t.r(), t.clone()]),
            Side::Left => TypeList::new(vec![t.clone(), t.l()]),
        };
        Self {
            label: "cap".into(),
            dom: TypeList::unit(),
            cod,
            kind: BoxKind::Cap,
        }
    }

    pub fn wire(t: &BasicType) -> Self {
        let single = TypeList::new(vec![t.clone()]);
        Self {
            label: "wire".into(),
            dom: single.clone(),
            cod: single,
            kind: BoxKind::Wire,
        }
    }

    pub fn swap(a: &BasicType, b: &BasicType) -> Self {
        Self {
            label: "swap".into(),
            dom: TypeList::new(vec![a.clone(), b.clone()]),
            cod: TypeList::new(vec![b.clone(), a.clone()]),
            kind: BoxKind::Swap,
        }
    }

    pub fn custom(label: &str, dom: TypeList, cod: TypeList) -> Self {
        Self {
            label: label.to_string(),
            dom,
            cod,
            kind: BoxKind::Custom,
        }
    }

    /// Rebuild a box from its parts, checking the structural invariants of
    /// the structural kinds (cups, caps, wires, swaps).
    pub fn from_parts(label: &str, kind: BoxKind, dom: TypeList, cod: TypeList) -> Result<Self, DiagramError> {
        let bad = |reason: &str| DiagramError::BadBox {
            label: label.to_string(),
            reason: reason.to_string(),
        };
        match kind {
            BoxKind::Cup => {
                if !(dom.len() == 2 && cod.is_empty() && dom[0].cancels_with(&dom[1])) {
                    return Err(bad("a cup needs dom [t, tʳ] and empty cod"));
                }
            }
            BoxKind::Cap => {
                // caps produce [tʳ, t] or [t, tˡ], both of the form [x, xˡ]
                if !(cod.len() == 2 && dom.is_empty() && cod[1].r() == cod[0]) {
                    return Err(bad("a cap needs empty dom and cod [t, tˡ]"));
                }
            }
            BoxKind::Wire => {
                if !(dom.len() == 1 && dom == cod) {
                    return Err(bad("a wire maps one type to itself"));
                }
            }
            BoxKind::Swap => {
                if !(dom.len() == 2 && cod.len() == 2 && dom[0] == cod[1] && dom[1] == cod[0]) {
                    return Err(bad("a swap exchanges two wires"));
                }
            }
            BoxKind::Word => {
                if !dom.is_empty() {
                    return Err(bad("a word is a state with empty dom"));
                }
            }
            BoxKind::Custom => {}
        }
        Ok(Self {
            label: label.to_string(),
            dom,
            cod,
            kind,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dom(&self) -> &TypeList {
        &self.dom
    }

    pub fn cod(&self) -> &TypeList {
        &self.cod
    }

    pub fn kind(&self) -> BoxKind {
        self.kind
    }
}

impl fmt::Display for DiagramBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} → {}", self.label, self.dom, self.cod)
    }
}

/// One slice of a diagram: `left ⊗ box ⊗ right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    left: TypeList,
    boxed: DiagramBox,
    right: TypeList,
}

impl Layer {
    pub fn left(&self) -> &TypeList {
        &self.left
    }

    pub fn right(&self) -> &TypeList {
        &self.right
    }

    pub fn boxed(&self) -> &DiagramBox {
        &self.boxed
    }

    pub fn offset(&self) -> usize {
        self.left.len()
    }

    pub fn dom(&self) -> TypeList {
        self.left.concat(&self.boxed.dom).concat(&self.right)
    }

    pub fn cod(&self) -> TypeList {
        self.left.concat(&self.boxed.cod).concat(&self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramDoc", into = "DiagramDoc")]
pub struct Diagram {
    dom: TypeList,
    cod: TypeList,
    layers: Vec<Layer>,
}

impl Diagram {
    /// The identity on `types`: no layers.
    pub fn id(types: TypeList) -> Self {
        Self {
            dom: types.clone(),
            cod: types,
            layers: Vec::new(),
        }
    }

    pub fn from_box(b: DiagramBox) -> Self {
        Self {
            dom: b.dom.clone(),
            cod: b.cod.clone(),
            layers: vec![Layer {
                left: TypeList::unit(),
                right: TypeList::unit(),
                boxed: b,
            }],
        }
    }

    pub fn word(label: &str, cod: TypeList) -> Self {
        Self::from_box(DiagramBox::word(label, cod))
    }

    /// Build a diagram from its domain and a list of `(offset, box)` slices,
    /// recomputing paddings and type-checking each step.
    pub fn from_slices(dom: TypeList, slices: impl IntoIterator<Item = (usize, DiagramBox)>) -> Result<Self, DiagramError> {
        let mut d = Self::id(dom);
        for (offset, b) in slices {
            d = d.then_box(offset, b)?;
        }
        Ok(d)
    }

    pub fn dom(&self) -> &TypeList {
        &self.dom
    }

    pub fn cod(&self) -> &TypeList {
        &self.cod
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn boxes(&self) -> impl Iterator<Item = &DiagramBox> {
        self.layers.iter().map(|l| &l.boxed)
    }

    pub fn slices(&self) -> impl Iterator<Item = (usize, &DiagramBox)> {
        self.layers.iter().map(|l| (l.offset(), &l.boxed))
    }

    /// Apply `b` to the wires `[offset, offset + |b.dom|)` of the codomain.
    pub fn then_box(&self, offset: usize, b: DiagramBox) -> Result<Self, DiagramError> {
        let wires = &self.cod;
        let width = b.dom.len();
        if offset + width > wires.len() || wires.slice(offset, offset + width) != b.dom {
            return Err(DiagramError::BadOffset {
                label: b.label.clone(),
                offset,
                wires: wires.clone(),
            });
        }
        let layer = Layer {
            left: wires.slice(0, offset),
            right: wires.slice(offset + width, wires.len()),
            boxed: b,
        };
        let cod = layer.cod();
        let mut layers = self.layers.clone();
        layers.push(layer);
        Ok(Self {
            dom: self.dom.clone(),
            cod,
            layers,
        })
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &Diagram) -> Result<Self, DiagramError> {
        compose_sequential(self, g)
    }

    /// `self ⊗ g`.
    pub fn tensor(&self, g: &Diagram) -> Self {
        compose_parallel(self, g)
    }
}

/// Sequential composition: `g ∘ f`, i.e. `f` then `g`.
pub fn compose_sequential(f: &Diagram, g: &Diagram) -> Result<Diagram, DiagramError> {
    if f.cod != g.dom {
        return Err(DiagramError::TypeMismatch {
            expected: f.cod.clone(),
            found: g.dom.clone(),
        });
    }
    let mut layers = f.layers.clone();
    layers.extend(g.layers.iter().cloned());
    Ok(Diagram {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        layers,
    })
}

/// Parallel composition: `f`'s layers run first, padded on the right by
/// `g.dom`, then `g`'s layers padded on the left by `f.cod`.
pub fn compose_parallel(f: &Diagram, g: &Diagram) -> Diagram {
    let mut layers = Vec::with_capacity(f.len() + g.len());
    for l in &f.layers {
        layers.push(Layer {
            left: l.left.clone(),
            boxed: l.boxed.clone(),
            right: l.right.concat(&g.dom),
        });
    }
    for l in &g.layers {
        layers.push(Layer {
            left: f.cod.concat(&l.left),
            boxed: l.boxed.clone(),
            right: l.right.clone(),
        });
    }
    Diagram {
        dom: f.dom.concat(&g.dom),
        cod: f.cod.concat(&g.cod),
        layers,
    }
}

pub fn cup(t: &BasicType, side: Side) -> Diagram {
    Diagram::from_box(DiagramBox::cup(t, side))
}

pub fn cap(t: &BasicType, side: Side) -> Diagram {
    Diagram::from_box(DiagramBox::cap(t, side))
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} → {}", self.dom, self.cod)?;
        for l in &self.layers {
            writeln!(f, "  @{} {}", l.offset(), l.boxed)?;
        }
        Ok(())
    }
}
