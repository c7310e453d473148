use std::collections::HashMap;

use super::{Bar, Barcode};
use crate::complex::FilteredComplex;

/// Symmetric difference of two sorted index lists (column addition over Z/2).
fn add_columns(target: &mut Vec<usize>, source: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < source.len() {
        match target[i].cmp(&source[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(source[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&source[j..]);
    *target = out;
}

/// Persistence barcode over Z/2 by standard column reduction.
///
/// Simplices are ordered by `(value, dimension, lexicographic)`. Bars are
/// reported for dimensions `0..=max_hom_dim`; essential classes (including
/// every H₀ component) appear with infinite death.
pub fn reduce_barcode(complex: &FilteredComplex, max_hom_dim: usize) -> Barcode {
    let mut order: Vec<usize> = (0..complex.len()).collect();
    let entries = complex.entries();
    order.sort_by(|&a, &b| {
        entries[a]
            .1
            .total_cmp(&entries[b].1)
            .then_with(|| entries[a].0.canonical_cmp(&entries[b].0))
    });
    let mut position = HashMap::with_capacity(order.len());
    for (p, &e) in order.iter().enumerate() {
        position.insert(&entries[e].0, p);
    }

    let mut columns: Vec<Vec<usize>> = order
        .iter()
        .map(|&e| {
            let mut col: Vec<usize> = entries[e].0.facets().map(|f| position[&f]).collect();
            col.sort_unstable();
            col
        })
        .collect();

    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; columns.len()];
    let mut bars = Vec::new();
    let mut zero_length = Vec::new();

    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match pivot_of.get(&low) {
                Some(&k) => {
                    let source = std::mem::take(&mut columns[k]);
                    add_columns(&mut columns[j], &source);
                    columns[k] = source;
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            pivot_of.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let birth_simplex = &entries[order[low]];
            let dim = birth_simplex.0.dim();
            if dim <= max_hom_dim {
                let bar = Bar::new(dim, birth_simplex.1, entries[order[j]].1);
                if bar.death > bar.birth {
                    bars.push(bar);
                } else {
                    zero_length.push(bar);
                }
            }
        }
    }
    for j in 0..columns.len() {
        if !paired[j] {
            let (simplex, value) = &entries[order[j]];
            if simplex.dim() <= max_hom_dim {
                bars.push(Bar::new(simplex.dim(), *value, f64::INFINITY));
            }
        }
    }
    let mut barcode = Barcode::new(bars);
    zero_length.sort_by(|a, b| a.dim.cmp(&b.dim).then(a.birth.total_cmp(&b.birth)));
    barcode.zero_length = zero_length;
    barcode
}
