//! Canonical labeling of vertex-colored multigraphs by partition refinement
//! and exhaustive individualization.

/// Multigraph as a dense multiplicity matrix; the diagonal counts tadpoles.
/// `color` is an arbitrary per-vertex label preserved by isomorphisms
/// (we use the hair count).
pub(crate) struct Multi {
    pub l: usize,
    pub adj: Vec<u16>,
    pub color: Vec<u16>,
}

pub(crate) struct Labeling {
    /// `perm[old] = new`.
    pub perm: Vec<usize>,
    /// Every automorphism of the canonical graph, as maps on new labels.
    /// Always contains the identity.
    pub autos: Vec<Vec<usize>>,
}

impl Multi {
    pub fn new(l: usize) -> Multi {
        Multi {
            l,
            adj: vec![0; l * l],
            color: vec![0; l],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            self.adj[u * self.l + u] += 1;
        } else {
            self.adj[u * self.l + v] += 1;
            self.adj[v * self.l + u] += 1;
        }
    }

    fn a(&self, u: usize, v: usize) -> u16 {
        self.adj[u * self.l + v]
    }

    fn certificate(&self, perm: &[usize]) -> Vec<u16> {
        let l = self.l;
        let mut inv = vec![0; l];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let mut cert = Vec::with_capacity(l * (l + 1) / 2 + l);
        for &o in &inv {
            cert.push(self.color[o]);
        }
        for i in 0..l {
            for j in i..l {
                cert.push(self.a(inv[i], inv[j]));
            }
        }
        cert
    }
}

fn rank_by<K: Ord + Clone>(keys: Vec<(K, usize)>, colors: &mut [u32]) -> usize {
    let mut keys = keys;
    keys.sort();
    let mut r = 0;
    for i in 0..keys.len() {
        if i > 0 && keys[i].0 != keys[i - 1].0 {
            r += 1;
        }
        colors[keys[i].1] = r;
    }
    if keys.is_empty() {
        0
    } else {
        r as usize + 1
    }
}

/// Equitable refinement. Colors are ranks of signatures, which keeps the
/// coloring invariant under isomorphism.
fn refine(m: &Multi, colors: &mut [u32]) -> usize {
    let l = m.l;
    let mut ncolors = {
        let mut c: Vec<u32> = colors.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    let mut nb: Vec<(u32, u16)> = Vec::with_capacity(l);
    while ncolors < l {
        let mut sigs = Vec::with_capacity(l);
        for u in 0..l {
            nb.clear();
            for v in 0..l {
                let a = m.a(u, v);
                if v != u && a > 0 {
                    nb.push((colors[v], a));
                }
            }
            nb.sort_unstable();
            let mut s = Vec::with_capacity(1 + 2 * nb.len());
            s.push(colors[u]);
            for &(c, a) in &nb {
                s.push(c);
                s.push(a as u32);
            }
            sigs.push((s, u));
        }
        let next = rank_by(sigs, colors);
        if next == ncolors {
            break;
        }
        ncolors = next;
    }
    ncolors
}

struct Search<'a> {
    m: &'a Multi,
    best: Option<Vec<u16>>,
    leaves: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, mut colors: Vec<u32>) {
        let l = self.m.l;
        if refine(self.m, &mut colors) == l {
            let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let cert = self.m.certificate(&perm);
            match &self.best {
                Some(b) if cert > *b => {}
                Some(b) if cert == *b => self.leaves.push(perm),
                _ => {
                    self.best = Some(cert);
                    self.leaves.clear();
                    self.leaves.push(perm);
                }
            }
            return;
        }
        // first non-singleton cell in color order
        let mut count = vec![0usize; l];
        for &c in &colors {
            count[c as usize] += 1;
        }
        let target = (0..l).find(|&c| count[c] > 1).unwrap() as u32;
        for u in 0..l {
            if colors[u] != target {
                continue;
            }
            let keys = (0..l)
                .map(|w| {
                    let demote = colors[w] == target && w != u;
                    ((colors[w], demote), w)
                })
                .collect();
            let mut next = vec![0; l];
            rank_by(keys, &mut next);
            self.visit(next);
        }
    }
}

pub(crate) fn canonical_labeling(m: &Multi) -> Labeling {
    let l = m.l;
    if l == 0 {
        return Labeling {
            perm: Vec::new(),
            autos: vec![Vec::new()],
        };
    }
    let mut colors = vec![0u32; l];
    let keys = (0..l)
        .map(|u| {
            let deg: u32 = (0..l).map(|v| m.a(u, v) as u32).sum();
            ((m.color[u], m.a(u, u), deg), u)
        })
        .collect();
    rank_by(keys, &mut colors);
    let mut s = Search {
        m,
        best: None,
        leaves: Vec::new(),
    };
    s.visit(colors);
    let perm = s.leaves[0].clone();
    let mut inv = vec![0; l];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    let autos = s
        .leaves
        .iter()
        .map(|p| (0..l).map(|c| p[inv[c]]).collect())
        .collect();
    Labeling { perm, autos }
}
