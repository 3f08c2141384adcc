//! Exact weighted set cover for prime-implicant selection (Petrick's problem
//! solved by branch and bound).

use std::cmp::Ordering;

use super::implicant::Implicant;

pub(crate) struct CoverProblem {
    pub element_count: usize,
    /// Candidate terms with the elements each one covers.
    pub candidates: Vec<(Implicant, Vec<usize>)>,
}

#[derive(Clone, PartialEq, Eq)]
struct Key {
    count: usize,
    literals: usize,
    terms: Vec<Implicant>,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then(self.literals.cmp(&other.literals))
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search<'a> {
    covers: Vec<Vec<usize>>,
    by_element: Vec<Vec<usize>>,
    terms: &'a [Implicant],
    best: Option<Key>,
}

impl Search<'_> {
    fn key(&self, chosen: &[usize]) -> Key {
        let mut terms: Vec<Implicant> = chosen.iter().map(|&c| self.terms[c]).collect();
        terms.sort();
        Key {
            count: terms.len(),
            literals: terms.iter().map(Implicant::literal_count).sum(),
            terms,
        }
    }

    /// Greedy set of uncovered elements that pairwise share no candidate;
    /// each needs its own term.
    fn lower_bound(&self, covered: &[u32]) -> usize {
        let mut blocked = vec![false; self.covers.len()];
        let mut bound = 0;
        for (e, cands) in self.by_element.iter().enumerate() {
            if covered[e] > 0 || cands.iter().any(|&c| blocked[c]) {
                continue;
            }
            bound += 1;
            for &c in cands {
                blocked[c] = true;
            }
        }
        bound
    }

    fn run(&mut self, chosen: &mut Vec<usize>, covered: &mut Vec<u32>) {
        let next = (0..covered.len())
            .filter(|&e| covered[e] == 0)
            .min_by_key(|&e| self.by_element[e].len());
        let Some(element) = next else {
            let key = self.key(chosen);
            if self.best.as_ref().is_none_or(|b| key < *b) {
                self.best = Some(key);
            }
            return;
        };
        if let Some(best) = &self.best {
            let bound = chosen.len() + self.lower_bound(covered);
            let literals: usize = chosen.iter().map(|&c| self.terms[c].literal_count()).sum();
            if bound > best.count || (bound == best.count && literals > best.literals) {
                return;
            }
        }
        let options = self.by_element[element].clone();
        for c in options {
            chosen.push(c);
            for &e in &self.covers[c] {
                covered[e] += 1;
            }
            self.run(chosen, covered);
            for &e in &self.covers[c] {
                covered[e] -= 1;
            }
            chosen.pop();
        }
    }
}

/// Returns indices into `problem.candidates` of the cover minimizing term
/// count, then total literals, then the sorted term list in canonical order.
///
/// Returns `None` when some element has no covering candidate.
pub(crate) fn solve(problem: &CoverProblem) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..problem.candidates.len()).collect();
    order.sort_by(|&a, &b| {
        let (ta, tb) = (&problem.candidates[a].0, &problem.candidates[b].0);
        ta.literal_count().cmp(&tb.literal_count()).then(ta.cmp(tb))
    });

    // Drop candidates dominated by a cheaper (or equally cheap and
    // canonically smaller) candidate covering a superset.
    let mut kept: Vec<usize> = Vec::new();
    for &c in &order {
        let (tc, ec) = &problem.candidates[c];
        if ec.is_empty() {
            continue;
        }
        let dominated = order.iter().any(|&d| {
            if d == c {
                return false;
            }
            let (td, ed) = &problem.candidates[d];
            let cheaper = td.literal_count() < tc.literal_count()
                || (td.literal_count() == tc.literal_count() && td < tc);
            cheaper && ec.iter().all(|e| ed.binary_search(e).is_ok())
        });
        if !dominated {
            kept.push(c);
        }
    }

    let terms: Vec<Implicant> = kept.iter().map(|&c| problem.candidates[c].0).collect();
    let covers: Vec<Vec<usize>> = kept
        .iter()
        .map(|&c| problem.candidates[c].1.clone())
        .collect();
    let mut by_element = vec![Vec::new(); problem.element_count];
    for (i, cov) in covers.iter().enumerate() {
        for &e in cov {
            by_element[e].push(i);
        }
    }
    if by_element.iter().any(Vec::is_empty) {
        return None;
    }

    let mut search = Search {
        covers,
        by_element,
        terms: &terms,
        best: None,
    };
    let mut covered = vec![0u32; problem.element_count];
    let mut chosen = Vec::new();

    // Essential candidates first.
    loop {
        let essential = (0..problem.element_count)
            .find(|&e| covered[e] == 0 && search.by_element[e].len() == 1)
            .map(|e| search.by_element[e][0]);
        match essential {
            Some(c) => {
                chosen.push(c);
                for &e in &search.covers[c] {
                    covered[e] += 1;
                }
            }
            None => break,
        }
    }
    search.run(&mut chosen, &mut covered);
    let best = search.best?;
    let mut picked: Vec<usize> = best
        .terms
        .iter()
        .map(|t| {
            kept[terms
                .iter()
                .position(|x| x == t)
                .expect("term from candidates")]
        })
        .collect();
    picked.sort_by(|&a, &b| problem.candidates[a].0.cmp(&problem.candidates[b].0));
    Some(picked)
}
