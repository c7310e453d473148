use super::{Cover, FilteredComplex, FuzzyCover, Simplex, SimplicialComplex};
use crate::Result;

/// Intersection of two sorted id lists. Switches to galloping search when
/// one list is much shorter than the other.
pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = Vec::new();
    if small.is_empty() {
        return out;
    }
    if small.len() * 8 < large.len() {
        let mut lo = 0;
        for &x in small {
            // Exponential probe from `lo`, then binary search in the bracket.
            let mut bound = 1;
            while lo + bound < large.len() && large[lo + bound] < x {
                bound *= 2;
            }
            let hi = (lo + bound + 1).min(large.len());
            match large[lo..hi].binary_search(&x) {
                Ok(p) => {
                    out.push(x);
                    lo += p + 1;
                }
                Err(p) => lo += p,
            }
            if lo >= large.len() {
                break;
            }
        }
    } else {
        let (mut i, mut j) = (0, 0);
        while i < small.len() && j < large.len() {
            match small[i].cmp(&large[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(small[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    out
}

/// Nerve of a cover up to dimension `max_dim`.
///
/// Vertex `i` is the index of a nonempty member; empty members produce no
/// vertex. Simplices are found by expanding cliques of the intersection
/// graph and testing the full intersection.
pub fn nerve(cover: &Cover, max_dim: usize) -> SimplicialComplex {
    let members = cover.members();
    let alive: Vec<usize> = cover.nonempty().collect();
    let k = members.len();
    let mut adjacent = vec![Vec::new(); k];
    for (a, &i) in alive.iter().enumerate() {
        for &j in &alive[a + 1..] {
            if !intersect_sorted(&members[i], &members[j]).is_empty() {
                adjacent[i].push(j);
            }
        }
    }

    let mut out = Vec::new();
    for &i in &alive {
        out.push(Simplex::vertex(i));
        if max_dim == 0 {
            continue;
        }
        let mut stack: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> =
            vec![(vec![i], members[i].clone(), adjacent[i].clone())];
        while let Some((simplex, common, candidates)) = stack.pop() {
            for (c, &j) in candidates.iter().enumerate() {
                let inter = intersect_sorted(&common, &members[j]);
                if inter.is_empty() {
                    continue;
                }
                let mut next = simplex.clone();
                next.push(j);
                if next.len() <= max_dim {
                    let cands: Vec<usize> = candidates[c + 1..]
                        .iter()
                        .copied()
                        .filter(|x| adjacent[j].binary_search(x).is_ok())
                        .collect();
                    if !cands.is_empty() {
                        stack.push((next.clone(), inter, cands));
                    }
                }
                out.push(Simplex::from_sorted(next));
            }
        }
    }
    SimplicialComplex::new(out).expect("nerve is face-closed")
}

/// Vertex list and the positive part of its pointwise minimum.
type Frame = (Vec<usize>, Vec<(usize, f64)>);

/// Suplevel values `λ(σ) = max_x min_{j∈σ} g[x, j]` of every simplex with
/// `λ(σ) > 0`, up to dimension `max_dim`, in canonical order.
pub fn fuzzy_nerve_levels(g: &FuzzyCover, max_dim: usize) -> Vec<(Simplex, f64)> {
    let m = g.matrix();
    let k = g.k();
    let supports: Vec<Vec<(usize, f64)>> = (0..k)
        .map(|j| {
            m.column(j)
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v > 0.0)
                .map(|(x, &v)| (x, v))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    // Depth-first over increasing vertex lists; each frame carries the
    // pointwise minimum restricted to where it is positive.
    let mut stack: Vec<Frame> = Vec::new();
    for i in 0..k {
        if supports[i].is_empty() {
            continue;
        }
        let level = supports[i].iter().map(|p| p.1).fold(0.0, f64::max);
        out.push((Simplex::vertex(i), level));
        if max_dim > 0 {
            stack.push((vec![i], supports[i].clone()));
        }
        while let Some((simplex, mins)) = stack.pop() {
            let last = *simplex.last().unwrap();
            for j in last + 1..k {
                let next_mins: Vec<(usize, f64)> = mins
                    .iter()
                    .filter_map(|&(x, v)| {
                        let w = m[[x, j]];
                        (w > 0.0).then_some((x, v.min(w)))
                    })
                    .collect();
                if next_mins.is_empty() {
                    continue;
                }
                let level = next_mins.iter().map(|p| p.1).fold(0.0, f64::max);
                let mut next = simplex.clone();
                next.push(j);
                out.push((Simplex::from_sorted(next.clone()), level));
                if next.len() <= max_dim {
                    stack.push((next, next_mins));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    out
}

/// Filtered nerve of a fuzzy cover indexed by `r = -ln λ ∈ [0, ∞)`.
///
/// The simplex set at `r` is the nerve of the cover thresholded at
/// `exp(-r)`; simplices with `λ(σ) = 0` are omitted.
pub fn fuzzy_nerve_filtration(g: &FuzzyCover, max_dim: usize) -> Result<FilteredComplex> {
    FilteredComplex::new(
        fuzzy_nerve_levels(g, max_dim)
            .into_iter()
            .map(|(s, level)| (s, 0.0 - level.ln())),
    )
}
