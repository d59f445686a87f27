//! `k`-way distribution by recursive exact-rank splitting.

use std::cmp::Ordering;
use std::ops::Range;

use super::select::select_rank;
use crate::iosim::{Element, SimArray, Simulator};

/// Bucket boundaries inside a `SimArray`: bucket `i` is
/// `offsets[i]..offsets[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketLayout {
    pub offsets: Vec<usize>,
}

impl BucketLayout {
    pub fn k(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn bucket(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Number of elements in the first `j` of `k` buckets over `n` elements,
/// with the `n mod k` larger buckets leftmost.
fn prefix_size(n: usize, k: usize, j: usize) -> usize {
    j * (n / k) + j.min(n % k)
}

/// Permutes `range` into `k` buckets of sizes `floor(n/k)` or `ceil(n/k)`
/// (larger ones first) such that every element of bucket `i` compares `>=`
/// every element of bucket `i - 1`.
pub fn distribute<T, F>(sim: &mut Simulator, arr: &mut SimArray<T>, range: Range<usize>, k: usize, cmp: &mut F) -> BucketLayout
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    let n = range.len();
    assert!(k >= 1 && k <= n.max(1), "need 1 <= k <= n (k={k}, n={n})");
    let mut offsets = Vec::with_capacity(k + 1);
    offsets.push(range.start);
    split(sim, arr, range.start, n, k, &mut offsets, cmp);
    BucketLayout { offsets }
}

fn split<T, F>(sim: &mut Simulator, arr: &mut SimArray<T>, lo: usize, n: usize, k: usize, offsets: &mut Vec<usize>, cmp: &mut F)
where
    T: Element,
    F: FnMut(&T, &T) -> Ordering,
{
    if k == 1 {
        offsets.push(lo + n);
        return;
    }
    let kl = k.div_ceil(2);
    let left = prefix_size(n, k, kl);
    if left > 0 && left < n {
        select_rank(sim, arr, lo..lo + n, left, cmp);
    }
    split(sim, arr, lo, left, kl, offsets, cmp);
    split(sim, arr, lo + left, n - left, k - kl, offsets, cmp);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn run(v: Vec<i64>, k: usize) -> (BucketLayout, Vec<i64>, u64) {
        let mut s = Simulator::new(CostParams::new(1 << 12, 64).unwrap());
        let n = v.len();
        let mut a = SimArray::from_vec(&mut s, v);
        let lay = distribute(&mut s, &mut a, 0..n, k, &mut |x: &i64, y: &i64| x.cmp(y));
        let c = s.snapshot().comparisons;
        (lay, a.into_vec(&mut s), c)
    }

    #[test]
    fn quarters() {
        let (lay, v, _) = run(vec![5, 3, 8, 1, 7, 2, 6, 4], 4);
        let mut got: Vec<Vec<i64>> = (0..4).map(|i| v[lay.bucket(i)].to_vec()).collect();
        got.iter_mut().for_each(|b| b.sort());
        assert_eq!(got, vec![vec![1, 2], vec![3, 4], vec![5, 6], vec![7, 8]]);
    }

    #[test]
    fn single_bucket_is_free() {
        let (lay, _, c) = run(vec![3, 1, 2], 1);
        assert_eq!((lay.sizes(), c), (vec![3], 0));
    }

    #[test]
    fn leftmost_buckets_are_larger() {
        assert_eq!(run((0..7).collect(), 3).0.sizes(), vec![3, 2, 2]);
        assert_eq!(run((0..10).collect(), 4).0.sizes(), vec![3, 3, 2, 2]);
    }

    #[test]
    fn comparison_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let n = rng.random_range(64..4096usize);
            let k = rng.random_range(2..=n.min(256));
            let v: Vec<i64> = (0..n).map(|_| rng.random_range(0..1000)).collect();
            let c = run(v, k).2 as f64;
            let nf = n as f64;
            worst = worst.max(c / (nf * (k as f64).log2() + nf));
        }
        assert!(worst < 40.0, "{worst}");
    }

    proptest::proptest! {
        #[test]
        fn buckets_are_ordered(v in proptest::collection::vec(-30i64..30, 1..300), kk in 1usize..40) {
            let k = kk.min(v.len());
            let n = v.len();
            let (lay, out, _) = run(v.clone(), k);
            let mut a = v.clone();
            let mut b = out.clone();
            a.sort();
            b.sort();
            proptest::prop_assert_eq!(a, b);
            for (i, sz) in lay.sizes().into_iter().enumerate() {
                proptest::prop_assert!(sz == n / k || sz == n.div_ceil(k));
                if i > 0 {
                    let prev_max = out[lay.bucket(i - 1)].iter().max().unwrap();
                    let cur_min = out[lay.bucket(i)].iter().min().unwrap();
                    proptest::prop_assert!(cur_min >= prev_max);
                }
            }
        }
    }
}
