//! Enumeration helpers shared by the exhaustive routines.

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            let go = rec(i + 1, n, k, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if k > n {
        return true;
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Calls `f` on each tuple in `0..sizes[0] x 0..sizes[1] x ...`, first coordinate slowest.
pub(crate) fn for_each_tuple(sizes: &[usize], f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if sizes.contains(&0) {
        return true;
    }
    let mut cur = vec![0; sizes.len()];
    loop {
        if !f(&cur) {
            return false;
        }
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Calls `f` on each arrangement of `items` until it returns false.
pub(crate) fn for_each_permutation(items: &mut [usize], f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    permute(items, 0, f)
}

fn permute(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return f(items);
    }
    for i in k..items.len() {
        items[k..=i].rotate_right(1);
        let go = permute(items, k + 1, f);
        items[k..=i].rotate_left(1);
        if !go {
            return false;
        }
    }
    true
}

/// Every permutation of `items`, in lexicographic order of positions.
pub(crate) fn all_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in all_permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
