//! Interchange normal form and snake removal.
//!
//! Two slicings of a diagram are related by interchanges exactly when they
//! draw the same plane graph: same wiring, and the same face for every closed
//! component floating free of the boundary. The normal form is the least
//! slicing of that graph under `(offset, box)` order per layer. It is built
//! greedily, asking at each step whether the remaining boxes can still be laid
//! out below the current wires; that question is answered on the plane map of
//! the remainder (Euler's formula for the fixed port order, plus the angle
//! count that makes a plane map drawable with every wire pointing down).

use std::collections::HashMap;

use super::{BoxKind, Diagram, DiagramBox};

type Slice = (usize, DiagramBox);
/// A layer tagged with the index of its box in the input diagram.
type Tagged = (usize, DiagramBox, usize);

fn slices_of(d: &Diagram) -> Vec<Slice> {
    d.slices().map(|(o, b)| (o, b.clone())).collect()
}

fn rebuild(d: &Diagram, slices: Vec<Slice>) -> Diagram {
    Diagram::from_slices(d.dom().clone(), slices).expect("interchange preserves typing")
}

/// Every diagram obtained from `d` by one interchange of layers `k` and `k + 1`.
///
/// Empty when the two boxes share a wire. When the later box is a state and
/// the earlier one an effect meeting at the same gap, the later box can slide
/// to either side, so two results are returned.
pub fn interchanges(d: &Diagram, k: usize) -> Vec<Diagram> {
    if k + 1 >= d.len() {
        return Vec::new();
    }
    let slices = slices_of(d);
    let (o1, b1) = slices[k].clone();
    let (o2, b2) = slices[k + 1].clone();
    let (d1, c1) = (b1.dom().len(), b1.cod().len());
    let (d2, c2) = (b2.dom().len(), b2.cod().len());
    let mut out = Vec::new();
    let mut push = |first: Slice, second: Slice| {
        let mut s = slices.clone();
        s[k] = first;
        s[k + 1] = second;
        let candidate = rebuild(d, s);
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    };
    if o2 + d2 <= o1 {
        push((o2, b2.clone()), (o1 + c2 - d2, b1.clone()));
    }
    if o2 >= o1 + c1 {
        push((o2 + d1 - c1, b2), (o1, b1));
    }
    out
}

/// Wiring of a slicing: every wire gets an id, every box knows its wires.
struct Net {
    boxes: Vec<DiagramBox>,
    inputs: Vec<Vec<usize>>,
    outputs: Vec<Vec<usize>>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    slices: Vec<Slice>,
}

impl Net {
    fn new(d: &Diagram) -> Self {
        let slices = slices_of(d);
        let mut next = d.dom().len();
        let dom: Vec<usize> = (0..next).collect();
        let mut frontier = dom.clone();
        let (mut inputs, mut outputs) = (Vec::new(), Vec::new());
        for (o, b) in &slices {
            let ins: Vec<usize> = frontier[*o..*o + b.dom().len()].to_vec();
            let outs: Vec<usize> = (next..next + b.cod().len()).collect();
            next += outs.len();
            frontier.splice(*o..*o + ins.len(), outs.iter().copied());
            inputs.push(ins);
            outputs.push(outs);
        }
        Self {
            boxes: slices.iter().map(|(_, b)| b.clone()).collect(),
            inputs,
            outputs,
            dom,
            cod: frontier,
            slices,
        }
    }
}

/// Plane map with vertices given by their clockwise list of half-edges.
/// Half-edge `2e` is the source end of wire `e`, `2e + 1` its target end.
struct PlaneMap {
    rot: Vec<Vec<usize>>,
    vertex: Vec<usize>,
    pos: Vec<usize>,
}

impl PlaneMap {
    /// `ends[v]` lists the wires entering `v` left to right, then those
    /// leaving it left to right.
    fn new(n_edges: usize, ends: &[(Vec<usize>, Vec<usize>)]) -> Self {
        let mut rot = Vec::with_capacity(ends.len());
        let mut vertex = vec![usize::MAX; 2 * n_edges];
        let mut pos = vec![usize::MAX; 2 * n_edges];
        for (v, (ins, outs)) in ends.iter().enumerate() {
            // clockwise from the top left: inputs, then outputs right to left
            let r: Vec<usize> = ins.iter().map(|e| 2 * e + 1).chain(outs.iter().rev().map(|e| 2 * e)).collect();
            for (i, &h) in r.iter().enumerate() {
                vertex[h] = v;
                pos[h] = i;
            }
            rot.push(r);
        }
        Self { rot, vertex, pos }
    }

    /// Faces as lists of angles `(vertex, arriving half-edge, leaving half-edge)`.
    fn faces(&self) -> Vec<Vec<(usize, usize, usize)>> {
        let mut seen = vec![false; self.vertex.len()];
        let mut faces = Vec::new();
        for start in 0..self.vertex.len() {
            if seen[start] || self.vertex[start] == usize::MAX {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                let arrive = h ^ 1;
                let u = self.vertex[arrive];
                let r = &self.rot[u];
                let leave = r[(self.pos[arrive] + 1) % r.len()];
                face.push((u, arrive, leave));
                h = leave;
            }
            faces.push(face);
        }
        faces
    }

    /// Both half-edges at the angle are inputs, or both outputs.
    fn is_switch(&self, arrive: usize, leave: usize) -> bool {
        arrive % 2 == leave % 2
    }

    /// The wide angle of a pure source or sink: above a state, below an effect.
    fn is_large(&self, u: usize, arrive: usize) -> bool {
        let r = &self.rot[u];
        let pure = r.iter().all(|h| h % 2 == r[0] % 2);
        pure && self.pos[arrive] == r.len() - 1
    }
}

/// Dense id for wire `e`, allocated on first sight.
fn fresh(e: usize, ids: &mut HashMap<usize, usize>) -> usize {
    let n = ids.len();
    *ids.entry(e).or_insert(n)
}

/// Whether boxes `rest` can be laid out below `frontier` so that they end on
/// `cod`, keeping their wiring.
fn completable(net: &Net, rest: &[usize], frontier: &[usize], cod: &[usize]) -> bool {
    // vertices: top of frame, bottom of frame, then the boxes; a closing wire
    // runs down the left edge of the frame
    let mut ids = HashMap::new();
    let closing = fresh(usize::MAX, &mut ids);
    let mut ends = Vec::with_capacity(rest.len() + 2);
    let top: Vec<usize> = std::iter::once(closing)
        .chain(frontier.iter().map(|&e| fresh(e, &mut ids)))
        .collect();
    let bottom: Vec<usize> = std::iter::once(closing).chain(cod.iter().map(|&e| fresh(e, &mut ids))).collect();
    ends.push((Vec::new(), top));
    ends.push((bottom, Vec::new()));
    for &b in rest {
        let ins = net.inputs[b].iter().map(|&e| fresh(e, &mut ids)).collect();
        let outs = net.outputs[b].iter().map(|&e| fresh(e, &mut ids)).collect();
        ends.push((ins, outs));
    }
    let n_edges = ids.len();
    let map = PlaneMap::new(n_edges, &ends);
    if map.vertex.contains(&usize::MAX) {
        return false;
    }
    let faces = map.faces();
    if ends.len() as isize - n_edges as isize + faces.len() as isize != 2 {
        return false;
    }
    // the outer face holds the wide angle above the frame's top
    faces.iter().all(|face| {
        let outer = face.iter().any(|&(u, a, _)| u == 0 && map.is_large(u, a));
        let switches = face.iter().filter(|&&(_, a, l)| map.is_switch(a, l)).count();
        let large = face.iter().filter(|&&(u, a, _)| map.is_large(u, a)).count();
        switches % 2 == 0 && large as isize == switches as isize / 2 + if outer { 1 } else { -1 }
    })
}

/// All least layer sequences `(offset, box index)` of the boxes `rest` below
/// `frontier`. More than one only when equal boxes trade places.
fn least_orders(
    net: &Net,
    rest: Vec<usize>,
    frontier: Vec<usize>,
    cod: &[usize],
    first: Option<&dyn Fn(usize) -> bool>,
) -> Vec<Vec<(usize, usize)>> {
    if rest.is_empty() {
        return vec![Vec::new()];
    }
    let mut best: Option<(usize, &DiagramBox)> = None;
    let mut moves: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, &b) in rest.iter().enumerate() {
        let ins = &net.inputs[b];
        let offsets: Vec<usize> = if ins.is_empty() {
            (0..=frontier.len()).collect()
        } else {
            frontier.windows(ins.len()).position(|w| w == ins.as_slice()).into_iter().collect()
        };
        if let Some(allowed) = first {
            if !allowed(b) {
                continue;
            }
        }
        for o in offsets {
            let key = (o, &net.boxes[b]);
            if best.is_some_and(|k| key > k) {
                continue;
            }
            let mut next = frontier.clone();
            next.splice(o..o + ins.len(), net.outputs[b].iter().copied());
            let mut remaining = rest.clone();
            remaining.remove(i);
            if !completable(net, &remaining, &next, cod) {
                continue;
            }
            if best.is_none_or(|k| key < k) {
                best = Some(key);
                moves.clear();
            }
            moves.push((o, b, next));
            // later offsets of this box only compare larger
            break;
        }
    }
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut least: Option<Vec<(usize, &DiagramBox)>> = None;
    for (o, b, next) in moves {
        let remaining: Vec<usize> = rest.iter().copied().filter(|&x| x != b).collect();
        for tail in least_orders(net, remaining, next, cod, None) {
            let mut order = Vec::with_capacity(tail.len() + 1);
            order.push((o, b));
            order.extend(tail);
            let plain: Vec<(usize, &DiagramBox)> = order.iter().map(|&(o, b)| (o, &net.boxes[b])).collect();
            match &least {
                Some(l) if plain > *l => continue,
                Some(l) if plain < *l => found.clear(),
                _ => {}
            }
            least = Some(plain);
            found.push(order);
        }
    }
    found
}

/// Faces of the closed component made of `boxes`, and the one holding the wide
/// angle above `top_box`, so that a first box can be checked to open onto it.
fn outer_face_states(net: &Net, boxes: &[usize], top_box: usize) -> Vec<usize> {
    if boxes.len() == 1 {
        // a lone scalar has no faces of its own
        return boxes.to_vec();
    }
    let mut ids = HashMap::new();
    let mut ends = Vec::with_capacity(boxes.len());
    for &b in boxes {
        let ins: Vec<usize> = net.inputs[b].iter().map(|&e| fresh(e, &mut ids)).collect();
        let outs: Vec<usize> = net.outputs[b].iter().map(|&e| fresh(e, &mut ids)).collect();
        ends.push((ins, outs));
    }
    let map = PlaneMap::new(ids.len(), &ends);
    let faces = map.faces();
    let top = boxes.iter().position(|&b| b == top_box).unwrap();
    let outer = faces
        .iter()
        .find(|f| f.iter().any(|&(u, a, _)| u == top && map.is_large(u, a) && a % 2 == 0))
        .expect("a state has a wide angle");
    boxes
        .iter()
        .enumerate()
        .filter(|&(v, &b)| net.inputs[b].is_empty() && outer.iter().any(|&(u, a, _)| u == v && map.is_large(u, a)))
        .map(|(_, &b)| b)
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn add(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Where a face of the plane first appears: a gap of the top boundary, or the
/// gap between outputs `j` and `j + 1` of a box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FaceKey {
    Top(usize),
    Inner(usize, usize),
}

/// Faces of a sliced diagram, traced gap by gap.
struct Faces {
    uf: UnionFind,
    /// face id of every gap before each layer, and after the last one
    snaps: Vec<Vec<usize>>,
    keys: Vec<FaceKey>,
}

impl Faces {
    fn trace(dom_len: usize, order: &[Tagged]) -> Self {
        let mut uf = UnionFind::new(0);
        let mut keys = Vec::new();
        let mut gaps: Vec<usize> = (0..=dom_len)
            .map(|i| {
                keys.push(FaceKey::Top(i));
                uf.add()
            })
            .collect();
        let mut snaps = Vec::with_capacity(order.len() + 1);
        for (o, b, id) in order {
            snaps.push(gaps.clone());
            let (d, c) = (b.dom().len(), b.cod().len());
            let (left, right) = (gaps[*o], gaps[*o + d]);
            let mut fresh = Vec::with_capacity(c + 1);
            if c == 0 {
                uf.union(left, right);
                fresh.push(left);
            } else {
                fresh.push(left);
                for j in 1..c {
                    keys.push(FaceKey::Inner(*id, j));
                    fresh.push(uf.add());
                }
                fresh.push(right);
            }
            gaps.splice(*o..=*o + d, fresh);
        }
        snaps.push(gaps);
        Self { uf, snaps, keys }
    }

    fn face_of(&self, key: FaceKey) -> Option<usize> {
        self.keys.iter().position(|k| *k == key)
    }

    /// Earliest layer index and left-most gap belonging to the face of `f`.
    fn first_gap(&mut self, f: usize) -> (usize, usize) {
        let root = self.uf.find(f);
        for t in 0..self.snaps.len() {
            for g in 0..self.snaps[t].len() {
                let face = self.snaps[t][g];
                if self.uf.find(face) == root {
                    return (t, g);
                }
            }
        }
        unreachable!("every face appears in some gap")
    }

    /// Key of the earliest appearance of the face of `f`.
    fn first_key(&mut self, f: usize) -> FaceKey {
        let root = self.uf.find(f);
        let mut best = None;
        for i in 0..self.keys.len() {
            if self.uf.find(i) == root {
                let seen = self.first_seen(i);
                if best.is_none_or(|(s, _)| seen < s) {
                    best = Some((seen, self.keys[i]));
                }
            }
        }
        best.expect("a face has at least one gap").1
    }

    fn first_seen(&self, face: usize) -> (usize, usize) {
        for (t, gaps) in self.snaps.iter().enumerate() {
            if let Some(g) = gaps.iter().position(|&x| x == face) {
                return (t, g);
            }
        }
        (usize::MAX, usize::MAX)
    }
}

/// A diagram split into its part reachable from the boundary and its closed
/// floating components, each remembering the face it floats in.
struct Parts {
    net: Net,
    /// box indices of each group in input order; group 0 holds the boundary
    groups: Vec<Vec<usize>>,
    /// for floating groups: owning group and the face it floats in
    placed: Vec<Option<(usize, FaceKey)>>,
}

fn split(d: &Diagram) -> Parts {
    let net = Net::new(d);
    let n = net.boxes.len();
    // node n is the boundary
    let mut producer = vec![n; net.dom.len()];
    let mut nodes = UnionFind::new(n + 1);
    for k in 0..n {
        for &e in &net.inputs[k] {
            nodes.union(producer[e], k);
        }
        for &e in &net.outputs[k] {
            if producer.len() <= e {
                producer.resize(e + 1, n);
            }
            producer[e] = k;
        }
    }
    for &e in &net.cod {
        nodes.union(producer[e], n);
    }
    let mut ids = vec![usize::MAX; n + 1];
    ids[nodes.find(n)] = 0;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new()];
    let mut group = vec![0; n];
    for (k, g) in group.iter_mut().enumerate() {
        let r = nodes.find(k);
        if ids[r] == usize::MAX {
            ids[r] = groups.len();
            groups.push(Vec::new());
        }
        *g = ids[r];
        groups[*g].push(k);
    }

    let tagged: Vec<Tagged> = net.slices.iter().cloned().enumerate().map(|(k, (o, b))| (o, b, k)).collect();
    let mut faces = Faces::trace(net.dom.len(), &tagged);
    let mut placed = vec![None; groups.len()];
    for (g, slot) in placed.iter_mut().enumerate().skip(1) {
        let k = groups[g][0];
        let face = faces.snaps[k][net.slices[k].0];
        let key = faces.first_key(face);
        let parent = match key {
            FaceKey::Top(_) => 0,
            FaceKey::Inner(b, _) => group[b],
        };
        *slot = Some((parent, key));
    }
    Parts { net, groups, placed }
}

fn emit(parts: &Parts, g: usize) -> Vec<Slice> {
    let net = &parts.net;
    let mut children: Vec<(FaceKey, Vec<Slice>)> = (0..parts.groups.len())
        .filter_map(|c| match parts.placed[c] {
            Some((parent, key)) if parent == g => Some((key, emit(parts, c))),
            _ => None,
        })
        .collect();
    children.sort_by(|a, b| a.1.cmp(&b.1));
    let boxes = parts.groups[g].clone();
    let orders = if g == 0 {
        least_orders(net, boxes, net.dom.clone(), &net.cod, None)
    } else {
        let openers = outer_face_states(net, &boxes, boxes[0]);
        let allowed = |b: usize| openers.contains(&b);
        least_orders(net, boxes, Vec::new(), &[], Some(&allowed))
    };
    let dom_len = if g == 0 { net.dom.len() } else { 0 };
    let mut best: Option<Vec<Slice>> = None;
    for order in orders {
        let order: Vec<Tagged> = order.into_iter().map(|(o, b)| (o, net.boxes[b].clone(), b)).collect();
        let mut faces = Faces::trace(dom_len, &order);
        let mut inserts: Vec<(usize, usize, &Vec<Slice>)> = children
            .iter()
            .map(|(key, block)| {
                let face = faces.face_of(*key).expect("owner traces the face");
                let (t, gap) = faces.first_gap(face);
                (t, gap, block)
            })
            .collect();
        inserts.sort();
        let mut out = Vec::new();
        let mut next = inserts.iter().peekable();
        for t in 0..=order.len() {
            while let Some((_, gap, block)) = next.next_if(|x| x.0 == t) {
                out.extend(block.iter().map(|(o, b)| (o + gap, b.clone())));
            }
            if let Some((o, b, _)) = order.get(t) {
                out.push((*o, b.clone()));
            }
        }
        if best.as_ref().is_none_or(|b| out < *b) {
            best = Some(out);
        }
    }
    best.unwrap_or_default()
}

/// Canonical representative of `d` up to the interchange law.
///
/// The part of `d` connected to its boundary is re-sliced to the least layer
/// sequence under `(offset, box)` order, which pulls every box as far left and
/// early as its wiring allows. Closed components that float free of the boundary
/// are normalised on their own and placed at the earliest, left-most gap of
/// the face they float in, sorted when several share a face.
pub fn normal_form(d: &Diagram) -> Diagram {
    rebuild(d, emit(&split(d), 0))
}

/// Remove zig-zags (a cap whose leg is next consumed by a cup together with
/// the neighbouring wire), then renormalise. Closed loops are kept.
pub fn yank(d: &Diagram) -> Diagram {
    let mut slices = slices_of(&normal_form(d));
    'outer: loop {
        for k in 0..slices.len() {
            if slices[k].1.kind() != BoxKind::Cap {
                continue;
            }
            if let Some(s) = yank_at(d, &slices, k) {
                slices = s;
                continue 'outer;
            }
        }
        return normal_form(&rebuild(d, slices));
    }
}

/// Slide the cap at `k` forward to the first box touching its legs and cancel
/// the pair when they form a zig-zag.
fn yank_at(d: &Diagram, slices: &[Slice], k: usize) -> Option<Vec<Slice>> {
    let mut s = slices.to_vec();
    let mut k = k;
    loop {
        if k + 1 >= s.len() {
            return None;
        }
        let (oc, cap) = (s[k].0, &s[k].1);
        let (ou, next) = (s[k + 1].0, &s[k + 1].1);
        let (dn, cn) = (next.dom().len(), next.cod().len());
        if ou + dn <= oc || ou >= oc + 2 {
            let left = ou + dn <= oc;
            let new_next = if left { ou } else { ou - 2 };
            let new_cap = if left { oc + cn - dn } else { oc };
            let (cap_box, next_box) = (s[k].1.clone(), s[k + 1].1.clone());
            s[k] = (new_next, next_box);
            s[k + 1] = (new_cap, cap_box);
            k += 1;
            continue;
        }
        if next.kind() != BoxKind::Cup {
            return None;
        }
        let (a, b) = (&cap.cod()[0], &cap.cod()[1]);
        let before = Diagram::from_slices(d.dom().clone(), s[..k].iter().cloned()).ok()?;
        let wires = before.cod();
        // cup on [b, c] where c sat at oc before the cap
        let right = ou == oc + 1 && oc < wires.len() && wires[oc] == *a && next.dom()[0] == *b;
        // cup on [c, a] where c sat at oc - 1
        let left = oc >= 1 && ou + 1 == oc && wires[oc - 1] == *b && next.dom()[1] == *a;
        if right || left {
            s.drain(k..k + 2);
            return Some(s);
        }
        return None;
    }
}
