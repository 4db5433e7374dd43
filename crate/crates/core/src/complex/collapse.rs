//! Greedy elementary collapse. A free pair is a simplex with exactly one
//! proper coface (which is then a facet-coface of a maximal simplex);
//! removing both preserves the homotopy type. Reaching a single vertex
//! certifies contractibility; getting stuck is inconclusive.

use std::collections::HashMap;

use super::ExplicitComplex;

#[derive(Clone, Debug)]
pub struct CollapseOutcome {
    /// What is left after no free pair remains.
    pub core: ExplicitComplex,
    /// True iff a single vertex remains; implies the input was
    /// contractible. False is inconclusive.
    pub collapsed_to_point: bool,
    pub pairs_removed: usize,
}

/// Deterministic greedy collapse: the lowest-dimension free simplex in
/// lexicographic order is removed first, together with its unique coface.
pub fn greedy_collapse(ec: &ExplicitComplex) -> CollapseOutcome {
    // Simplices in (dim, lex) order; this is the scan priority.
    let mut simplices: Vec<Vec<u32>> = ec.simplices().cloned().collect();
    simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<&Vec<u32>, usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();

    let n = simplices.len();
    // Proper cofaces and faces by id.
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut faces: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in simplices.iter().enumerate() {
        if s.len() == 1 {
            continue;
        }
        let k = s.len();
        for mask in 1u32..((1 << k) - 1) {
            let face: Vec<u32> = (0..k)
                .filter(|&b| mask & (1 << b) != 0)
                .map(|b| s[b])
                .collect();
            let j = index[&face];
            cofaces[j].push(i);
            faces[i].push(j);
        }
    }

    let mut alive = vec![true; n];
    let mut coface_count: Vec<usize> = cofaces.iter().map(Vec::len).collect();
    let mut pairs_removed = 0;
    loop {
        let mut removed_any = false;
        for tau in 0..n {
            if !alive[tau] || coface_count[tau] != 1 {
                continue;
            }
            let sigma = *cofaces[tau]
                .iter()
                .find(|&&c| alive[c])
                .expect("coface count said one alive coface exists");
            alive[tau] = false;
            alive[sigma] = false;
            for &f in &faces[tau] {
                if alive[f] {
                    coface_count[f] -= 1;
                }
            }
            for &f in &faces[sigma] {
                if alive[f] {
                    coface_count[f] -= 1;
                }
            }
            pairs_removed += 1;
            removed_any = true;
        }
        if !removed_any {
            break;
        }
    }

    let remaining: Vec<Vec<u32>> = simplices
        .iter()
        .enumerate()
        .filter(|(i, _)| alive[*i])
        .map(|(_, s)| s.clone())
        .collect();
    let collapsed_to_point = remaining.len() == 1 && remaining[0].len() == 1;
    let core = ExplicitComplex::from_simplices(
        ec.labels().to_vec(),
        &remaining,
        remaining.len().max(1) * 2,
    )
    .expect("remaining set is already face-closed");
    CollapseOutcome {
        core,
        collapsed_to_point,
        pairs_removed,
    }
}
