/// Exponent vector of a monomial in `n + 1` homogeneous variables.
pub type Exponent = Vec<u8>;

/// `C(n, k)` with saturation at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of degree-`t` monomials in `n + 1` variables, `C(t + n, n)`.
pub fn monomial_count(n: usize, t: u32) -> u64 {
    binomial(t as u64 + n as u64, n as u64)
}

/// All degree-`t` monomials in `caps.len()` variables with exponent of
/// variable `i` at most `caps[i]`, in lexicographic order with the first
/// variable's exponent descending.
pub fn monomials_capped(t: u32, caps: &[u32]) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; caps.len()];
    if caps.is_empty() {
        return out;
    }
    // Suffix sums of caps let the walk skip dead branches.
    let mut room = vec![0u64; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        room[i] = room[i + 1] + caps[i] as u64;
    }
    walk(0, t, caps, &room, &mut cur, &mut out);
    out
}

fn walk(i: usize, left: u32, caps: &[u32], room: &[u64], cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if i + 1 == caps.len() {
        if left <= caps[i] {
            cur[i] = left as u8;
            out.push(cur.clone());
        }
        return;
    }
    let hi = left.min(caps[i]);
    for e in (0..=hi).rev() {
        if (left - e) as u64 > room[i + 1] {
            break;
        }
        cur[i] = e as u8;
        walk(i + 1, left - e, caps, room, cur, out);
    }
    cur[i] = 0;
}

/// All degree-`t` monomials in `vars` variables.
pub fn monomials(vars: usize, t: u32) -> Vec<Exponent> {
    monomials_capped(t, &vec![t; vars])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(32, 16), 601_080_390);
        assert_eq!(monomial_count(2, 2), 6);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn enumeration_counts() {
        for vars in 1..5 {
            for t in 0..6 {
                let ms = monomials(vars, t);
                assert_eq!(ms.len() as u64, monomial_count(vars - 1, t));
                assert!(ms.iter().all(|m| m.iter().map(|&e| e as u32).sum::<u32>() == t));
            }
        }
    }

    #[test]
    fn caps_give_multilinear_count() {
        // Degree n in n+1 variables, all but the first capped at 1: 2^n.
        for n in 1..8 {
            let mut caps = vec![1u32; n + 1];
            caps[0] = n as u32;
            assert_eq!(monomials_capped(n as u32, &caps).len(), 1 << n);
        }
    }

    #[test]
    fn order_is_descending_in_first_variable() {
        let ms = monomials(2, 2);
        assert_eq!(ms, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }
}
