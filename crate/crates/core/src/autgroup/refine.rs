//! Joint color refinement and individualization search for structure
//! preserving maps between two graphs given as adjacency lists.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

type Coloring = Vec<u32>;

pub(crate) struct Matcher<'a> {
    left: &'a [Vec<usize>],
    right: &'a [Vec<usize>],
}

impl<'a> Matcher<'a> {
    pub(crate) fn new(left: &'a [Vec<usize>], right: &'a [Vec<usize>]) -> Self {
        Self { left, right }
    }

    fn n(&self) -> usize {
        self.left.len()
    }

    /// Colorings with each `(x, y)` pair individualized by a fresh color.
    fn seeded(&self, pairs: &[(usize, usize)]) -> (Coloring, Coloring) {
        let n = self.n();
        let (mut cl, mut cr) = (vec![0u32; n], vec![0u32; n]);
        for (i, &(x, y)) in pairs.iter().enumerate() {
            cl[x] = i as u32 + 1;
            cr[y] = i as u32 + 1;
        }
        (cl, cr)
    }

    /// Refines both colorings to their common stable partition, using one
    /// signature table for both sides. Returns `false` as soon as the two
    /// sides disagree on the size of some color class.
    fn refine(&self, cl: &mut Coloring, cr: &mut Coloring) -> bool {
        let mut classes = count_classes(cl);
        loop {
            let sig = |adj: &[Vec<usize>], c: &Coloring, u: usize| {
                let mut nb: Vec<u32> = adj[u].iter().map(|&w| c[w]).collect();
                nb.sort_unstable();
                (c[u], nb)
            };
            let sl: Vec<_> = (0..self.n()).map(|u| sig(self.left, cl, u)).collect();
            let sr: Vec<_> = (0..self.n()).map(|u| sig(self.right, cr, u)).collect();
            let mut table: BTreeMap<&(u32, Vec<u32>), (i64, u32)> = BTreeMap::new();
            for s in &sl {
                table.entry(s).or_insert((0, 0)).0 += 1;
            }
            for s in &sr {
                table.entry(s).or_insert((0, 0)).0 -= 1;
            }
            if table.values().any(|&(balance, _)| balance != 0) {
                return false;
            }
            for (id, entry) in table.values_mut().enumerate() {
                entry.1 = id as u32;
            }
            let next = table.len();
            for (u, s) in sl.iter().enumerate() {
                cl[u] = table[s].1;
            }
            for (u, s) in sr.iter().enumerate() {
                cr[u] = table[s].1;
            }
            if next == classes {
                return true;
            }
            classes = next;
        }
    }

    /// Right-side nodes sharing the color of `k` after individualizing the
    /// fixed prefix.
    pub(crate) fn candidates(&self, prefix: &[usize], k: usize) -> Vec<usize> {
        let pairs: Vec<(usize, usize)> = prefix.iter().map(|&x| (x, x)).collect();
        let (mut cl, mut cr) = self.seeded(&pairs);
        if !self.refine(&mut cl, &mut cr) {
            return Vec::new();
        }
        (0..self.n()).filter(|&w| cr[w] == cl[k]).collect()
    }

    /// A map fixing `prefix` pointwise and sending `k` to `w`.
    pub(crate) fn extend(&self, prefix: &[usize], k: usize, w: usize) -> Option<Vec<usize>> {
        let mut pairs: Vec<(usize, usize)> = prefix.iter().map(|&x| (x, x)).collect();
        pairs.push((k, w));
        let (cl, cr) = self.seeded(&pairs);
        self.search(cl, cr)
    }

    pub(crate) fn isomorphism(&self) -> Option<Vec<usize>> {
        if self.left.len() != self.right.len() {
            return None;
        }
        let (cl, cr) = self.seeded(&[]);
        self.search(cl, cr)
    }

    fn search(&self, mut cl: Coloring, mut cr: Coloring) -> Option<Vec<usize>> {
        if !self.refine(&mut cl, &mut cr) {
            return None;
        }
        let n = self.n();
        let mut sizes = vec![0usize; n];
        for &c in &cl {
            sizes[c as usize] += 1;
        }
        match (0..n).find(|&x| sizes[cl[x] as usize] > 1) {
            None => {
                let mut by_color = vec![usize::MAX; n];
                for (y, &c) in cr.iter().enumerate() {
                    by_color[c as usize] = y;
                }
                let perm: Vec<usize> = cl.iter().map(|&c| by_color[c as usize]).collect();
                self.is_structure_preserving(&perm).then_some(perm)
            }
            Some(x) => {
                let fresh = n as u32;
                for y in (0..n).filter(|&y| cr[y] == cl[x]) {
                    let (mut l, mut r) = (cl.clone(), cr.clone());
                    l[x] = fresh;
                    r[y] = fresh;
                    if let Some(p) = self.search(l, r) {
                        return Some(p);
                    }
                }
                None
            }
        }
    }

    fn is_structure_preserving(&self, perm: &[usize]) -> bool {
        self.left.iter().enumerate().all(|(u, nb)| {
            nb.len() == self.right[perm[u]].len()
                && nb.iter().all(|&v| self.right[perm[u]].contains(&perm[v]))
        })
    }
}

fn count_classes(c: &Coloring) -> usize {
    let mut seen: Vec<u32> = c.clone();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}
