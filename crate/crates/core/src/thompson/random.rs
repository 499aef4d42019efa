//! Seeded random generation of group elements for verification sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{TwoVElement, VElement};

fn random_code<R: Rng>(rng: &mut R, splits: usize, max_depth: usize) -> Vec<String> {
    let mut leaves = vec![String::new()];
    for _ in 0..splits {
        let candidates: Vec<usize> = leaves
            .iter()
            .enumerate()
            .filter(|(_, w)| w.len() < max_depth)
            .map(|(i, _)| i)
            .collect();
        let &i = candidates.choose(rng).expect("splittable leaf exists");
        let w = leaves.remove(i);
        leaves.push(format!("{w}0"));
        leaves.push(format!("{w}1"));
    }
    leaves.sort();
    leaves
}

/// A pseudo-random V element whose tree pair has depth at most `max_depth`.
pub fn random_v_element<R: Rng>(rng: &mut R, max_depth: usize) -> VElement {
    assert!(max_depth >= 1);
    let cap = ((1usize << max_depth) - 1).min(2 * max_depth);
    let splits = rng.gen_range(0..=cap);
    let domain = random_code(rng, splits, max_depth);
    let mut range = random_code(rng, splits, max_depth);
    range.shuffle(rng);
    VElement::new(domain.into_iter().zip(range)).expect("random codes are complete")
}

fn random_rect_partition<R: Rng>(
    rng: &mut R,
    splits: usize,
    max_depth: usize,
) -> Vec<(String, String)> {
    let mut rects = vec![(String::new(), String::new())];
    for _ in 0..splits {
        let candidates: Vec<(usize, bool)> = rects
            .iter()
            .enumerate()
            .flat_map(|(i, (p, q))| {
                let mut axes = Vec::new();
                if p.len() < max_depth {
                    axes.push((i, true));
                }
                if q.len() < max_depth {
                    axes.push((i, false));
                }
                axes
            })
            .collect();
        let &(i, first_axis) = candidates.choose(rng).expect("splittable rectangle exists");
        let (p, q) = rects.remove(i);
        if first_axis {
            rects.push((format!("{p}0"), q.clone()));
            rects.push((format!("{p}1"), q));
        } else {
            rects.push((p.clone(), format!("{q}0")));
            rects.push((p, format!("{q}1")));
        }
    }
    rects.sort();
    rects
}

/// A pseudo-random 2V element whose rectangle coordinates have depth at most
/// `max_depth`.
pub fn random_tv_element<R: Rng>(rng: &mut R, max_depth: usize) -> TwoVElement {
    assert!(max_depth >= 1);
    let splits = rng.gen_range(0..=2 * max_depth);
    let domain = random_rect_partition(rng, splits, max_depth);
    let mut range = random_rect_partition(rng, splits, max_depth);
    range.shuffle(rng);
    TwoVElement::new(domain.into_iter().zip(range)).expect("random partitions are complete")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_elements_are_valid_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let elems: Vec<VElement> = (0..10).map(|_| random_v_element(&mut rng, 4)).collect();
        for g in &elems {
            assert!(g.depth() <= 4);
            assert!(g.compose(&g.inverse()).is_identity());
        }
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let elems2: Vec<VElement> = (0..10).map(|_| random_v_element(&mut rng2, 4)).collect();
        assert_eq!(elems, elems2);
    }

    #[test]
    fn random_tv_elements_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let g = random_tv_element(&mut rng, 3);
            assert!(g.depth() <= 3);
            assert!(g.compose(&g.inverse()).is_identity());
        }
    }
}
