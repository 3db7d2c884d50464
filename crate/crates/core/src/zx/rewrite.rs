//! Spider fusion, identity removal and colour change. Every rule preserves
//! the linear map up to a nonzero global scalar.

use std::f64::consts::PI;

use super::{phase_eq, wrap_phase, EdgeKind, VertexKind, ZxError, ZxGraph};

/// Drop plain self-loops and turn Hadamard self-loops into a π phase.
pub fn normalize(g: &ZxGraph) -> ZxGraph {
    let mut g = g.clone();
    let mut flips: Vec<usize> = Vec::new();
    g.edges.retain(|e| {
        if e.a != e.b {
            return true;
        }
        if e.kind == EdgeKind::Hadamard {
            flips.push(e.a);
        }
        false
    });
    for v in flips {
        let x = g.vertices.get_mut(&v).expect("loop on a live vertex");
        x.phase = wrap_phase(x.phase + PI);
    }
    g
}

/// Fuse same-coloured spiders joined by a plain edge until none remain;
/// phases add.
pub fn fuse_spiders(g: &ZxGraph) -> ZxGraph {
    let mut g = normalize(g);
    while let Some(i) = g
        .edges
        .iter()
        .position(|e| e.kind == EdgeKind::Plain && e.a != e.b && g.is_spider(e.a) && g.vertices[&e.a].kind == g.vertices[&e.b].kind)
    {
        let (keep, gone) = (g.edges[i].a, g.edges[i].b);
        g.edges.remove(i);
        let phase = g.vertices[&gone].phase;
        let x = g.vertices.get_mut(&keep).unwrap();
        x.phase = wrap_phase(x.phase + phase);
        for e in g.edges.iter_mut() {
            if e.a == gone {
                e.a = keep;
            }
            if e.b == gone {
                e.b = keep;
            }
        }
        g.vertices.remove(&gone);
        // parallel edges between the pair became self-loops
        g = normalize(&g);
    }
    g
}

/// Replace every phase-free spider with exactly two legs by a wire.
pub fn remove_identity_spiders(g: &ZxGraph) -> ZxGraph {
    let mut g = normalize(g);
    loop {
        let found = g.spiders().find(|&v| {
            let inc = g.incident(v);
            inc.len() == 2 && phase_eq(g.vertices[&v].phase, 0.0) && inc.iter().all(|&i| g.edges[i].a != g.edges[i].b)
        });
        let Some(v) = found else {
            return g;
        };
        let inc = g.incident(v);
        let (e1, e2) = (g.edges[inc[0]], g.edges[inc[1]]);
        let (u, w) = (e1.other(v), e2.other(v));
        g.remove_vertex(v);
        g.add_edge(u, w, e1.kind.then(e2.kind));
        g = normalize(&g);
    }
}

/// Swap the colour of spider `v`, toggling every edge at it between plain and
/// Hadamard.
pub fn color_change(g: &ZxGraph, v: usize) -> Result<ZxGraph, ZxError> {
    let mut g = g.clone();
    let x = g
        .vertices
        .get_mut(&v)
        .filter(|x| x.kind != VertexKind::Boundary)
        .ok_or(ZxError::NotASpider(v))?;
    x.kind = match x.kind {
        VertexKind::Z => VertexKind::X,
        _ => VertexKind::Z,
    };
    for e in g.edges.iter_mut() {
        // a self-loop is toggled at both ends, which leaves it alone
        if e.touches(v) && e.a != e.b {
            e.kind = e.kind.toggled();
        }
    }
    Ok(g)
}
