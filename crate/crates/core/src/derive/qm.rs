// SPDX-License-Identifier: Apache-2.0

//! Exact two-level minimization (Quine–McCluskey prime generation followed by
//! a branch-and-bound minimum cover).
//!
//! Variables are numbered `0..k`; variable `j` lives at bit `k - 1 - j` of a
//! minterm index so that minterm order matches truth-table row order.

use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Most variables a function may have.
pub const MAX_VARS: usize = 10;

/// A product term. Bits set in `care` are literals; `value` gives their
/// polarity (1 = positive). Bits outside `care` are zero in `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub value: u32,
    pub care: u32,
}

impl Cube {
    pub const TAUTOLOGY: Cube = Cube { value: 0, care: 0 };

    pub fn literals(self) -> u32 {
        self.care.count_ones()
    }

    pub fn contains(self, minterm: u32) -> bool {
        minterm & self.care == self.value
    }

    /// Literal of variable `j` in a `k`-variable space: `Some(polarity)` or
    /// `None` when the variable is absent.
    pub fn literal(self, k: usize, j: usize) -> Option<bool> {
        let bit = 1 << (k - 1 - j);
        (self.care & bit != 0).then_some(self.value & bit != 0)
    }

    /// `1`, `0` or `-` per variable, in variable order.
    pub fn pattern(self, k: usize) -> String {
        (0..k)
            .map(|j| match self.literal(k, j) {
                Some(true) => '1',
                Some(false) => '0',
                None => '-',
            })
            .collect()
    }
}

/// Cost of a cover: fewer cubes first, then fewer literals.
fn cost(cover: &[Cube]) -> (usize, u32) {
    (cover.len(), cover.iter().map(|c| c.literals()).sum())
}

/// Total order used to pick among minimum covers. Covers are compared by
/// cost, then by their sorted pattern strings.
fn compare_covers(k: usize, a: &[Cube], b: &[Cube]) -> Ordering {
    cost(a).cmp(&cost(b)).then_with(|| {
        let pa: Vec<String> = a.iter().map(|c| c.pattern(k)).collect();
        let pb: Vec<String> = b.iter().map(|c| c.pattern(k)).collect();
        pa.cmp(&pb)
    })
}

/// All prime implicants of the function whose on-set is `ones`.
pub fn prime_implicants(k: usize, ones: &[u32]) -> Vec<Cube> {
    assert!(k <= MAX_VARS, "too many variables");
    let full = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let mut level: BTreeSet<Cube> = ones.iter().map(|&m| Cube { value: m, care: full }).collect();
    let mut primes = BTreeSet::new();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        let mut merged = BTreeSet::new();
        let cubes: Vec<Cube> = level.iter().copied().collect();
        for (i, a) in cubes.iter().enumerate() {
            for b in &cubes[i + 1..] {
                if a.care != b.care {
                    continue;
                }
                let diff = a.value ^ b.value;
                if diff.count_ones() == 1 {
                    next.insert(Cube {
                        value: a.value & !diff,
                        care: a.care & !diff,
                    });
                    merged.insert(*a);
                    merged.insert(*b);
                }
            }
        }
        primes.extend(level.difference(&merged).copied());
        level = next;
    }
    primes.into_iter().collect()
}

/// Minimum-cost sum of products for the on-set `ones` over `k` variables.
///
/// Returns the cover sorted by pattern. An empty on-set yields an empty
/// cover (constant 0); a full on-set yields [`Cube::TAUTOLOGY`].
pub fn minimize(k: usize, ones: &[u32]) -> Vec<Cube> {
    let mut ones: Vec<u32> = ones.to_vec();
    ones.sort_unstable();
    ones.dedup();
    if ones.is_empty() {
        return Vec::new();
    }
    let primes = prime_implicants(k, &ones);
    let covering: Vec<Vec<usize>> = ones
        .iter()
        .map(|&m| {
            let mut ps: Vec<usize> = (0..primes.len()).filter(|&p| primes[p].contains(m)).collect();
            ps.sort_by(|&x, &y| {
                primes[x]
                    .literals()
                    .cmp(&primes[y].literals())
                    .then_with(|| primes[x].pattern(k).cmp(&primes[y].pattern(k)))
            });
            ps
        })
        .collect();
    let min_literals = primes.iter().map(|p| p.literals()).min().unwrap_or(0);

    struct Search<'a> {
        k: usize,
        ones: &'a [u32],
        primes: &'a [Cube],
        covering: &'a [Vec<usize>],
        min_literals: u32,
        best: Option<Vec<Cube>>,
    }

    impl Search<'_> {
        fn run(&mut self, chosen: &mut Vec<Cube>, covered: &mut Vec<bool>) {
            let next = (0..self.ones.len())
                .filter(|&i| !covered[i])
                .min_by_key(|&i| self.covering[i].len());
            let Some(target) = next else {
                let mut cover = chosen.clone();
                cover.sort_by_key(|c| c.pattern(self.k));
                let better = match &self.best {
                    None => true,
                    Some(best) => compare_covers(self.k, &cover, best) == Ordering::Less,
                };
                if better {
                    self.best = Some(cover);
                }
                return;
            };
            if let Some(best) = &self.best {
                let (cubes, lits) = cost(chosen);
                if (cubes + 1, lits + self.min_literals) > cost(best) {
                    return;
                }
            }
            for &p in &self.covering[target] {
                let prime = self.primes[p];
                let newly: Vec<usize> = (0..self.ones.len())
                    .filter(|&i| !covered[i] && prime.contains(self.ones[i]))
                    .collect();
                for &i in &newly {
                    covered[i] = true;
                }
                chosen.push(prime);
                self.run(chosen, covered);
                chosen.pop();
                for &i in &newly {
                    covered[i] = false;
                }
            }
        }
    }

    let mut search = Search {
        k,
        ones: &ones,
        primes: &primes,
        covering: &covering,
        min_literals,
        best: None,
    };
    search.run(&mut Vec::new(), &mut vec![false; ones.len()]);
    search.best.expect("every minterm is covered by some prime")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(cover: &[Cube], m: u32) -> bool {
        cover.iter().any(|c| c.contains(m))
    }

    /// Smallest cost of any cover built from arbitrary implicants, by
    /// exhaustive search over covers of up to `max` cubes.
    fn brute_force_cost(k: usize, ones: &[u32], max: usize) -> (usize, u32) {
        let on = |m: u32| ones.contains(&m);
        let all: Vec<Cube> = (0..3u32.pow(k as u32))
            .map(|mut t| {
                let mut c = Cube::TAUTOLOGY;
                for j in 0..k {
                    let bit = 1 << (k - 1 - j);
                    match t % 3 {
                        0 => {}
                        1 => c.care |= bit,
                        _ => {
                            c.care |= bit;
                            c.value |= bit;
                        }
                    }
                    t /= 3;
                }
                c
            })
            .filter(|c| (0..1u32 << k).all(|m| !c.contains(m) || on(m)))
            .collect();
        let mut best = (usize::MAX, u32::MAX);
        fn rec(
            k: usize,
            all: &[Cube],
            start: usize,
            chosen: &mut Vec<Cube>,
            max: usize,
            ones: &[u32],
            best: &mut (usize, u32),
        ) {
            if ones.iter().all(|&m| eval(chosen, m)) {
                *best = (*best).min(cost(chosen));
                return;
            }
            if chosen.len() == max {
                return;
            }
            for i in start..all.len() {
                chosen.push(all[i]);
                rec(k, all, i + 1, chosen, max, ones, best);
                chosen.pop();
            }
        }
        rec(k, &all, 0, &mut Vec::new(), max, ones, &mut best);
        best
    }

    #[test]
    fn constants() {
        assert!(minimize(3, &[]).is_empty());
        assert_eq!(minimize(2, &[0, 1, 2, 3]), vec![Cube::TAUTOLOGY]);
    }

    #[test]
    fn xor_needs_two_full_cubes() {
        let cover = minimize(2, &[1, 2]);
        let patterns: Vec<String> = cover.iter().map(|c| c.pattern(2)).collect();
        assert_eq!(patterns, vec!["01", "10"]);
    }

    #[test]
    fn classic_example() {
        // f = sum m(4, 8, 10, 11, 12, 15) + nothing else, 4 variables.
        let ones = [4, 8, 10, 11, 12, 15];
        let cover = minimize(4, &ones);
        for m in 0..16 {
            assert_eq!(eval(&cover, m), ones.contains(&m), "minterm {m}");
        }
        assert_eq!(cost(&cover), brute_force_cost(4, &ones, 4));
    }

    proptest! {
        #[test]
        fn minimal_and_equivalent(bits in 0u32..256) {
            let ones: Vec<u32> = (0..8).filter(|m| bits >> m & 1 == 1).collect();
            let cover = minimize(3, &ones);
            for m in 0..8 {
                prop_assert_eq!(eval(&cover, m), ones.contains(&m));
            }
            prop_assert_eq!(cost(&cover), brute_force_cost(3, &ones, 4));
        }
    }
}
