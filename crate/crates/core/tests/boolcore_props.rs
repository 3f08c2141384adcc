use etpla_core::boolcore::{
    check_equivalence, minimize, qm_prime_implicants, Cell, Implicant, Literal, TruthTable,
};
use proptest::prelude::*;

/// Every cube over `n` inputs, by enumeration of the 3^n literal choices.
fn all_cubes(n: usize) -> Vec<Implicant> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let lits: Vec<Literal> = (0..n)
            .map(|_| {
                let l = [Literal::Negative, Literal::Positive, Literal::Absent][c % 3];
                c /= 3;
                l
            })
            .collect();
        out.push(Implicant::from_literals(&lits));
    }
    out
}

/// Prime implicants by brute force: implicants of `care` not strictly
/// contained in another implicant.
fn brute_primes(n: usize, care: &[bool]) -> Vec<Implicant> {
    let implicants: Vec<Implicant> = all_cubes(n)
        .into_iter()
        .filter(|c| c.covered_minterms().iter().all(|&v| care[v as usize]))
        .collect();
    let mut primes: Vec<Implicant> = implicants
        .iter()
        .filter(|c| !implicants.iter().any(|d| d != *c && d.contains(c)))
        .copied()
        .collect();
    primes.sort();
    primes
}

/// Smallest number of primes covering `on`, by trying every subset.
fn brute_min_cover(primes: &[Implicant], on: &[u32]) -> usize {
    (0u32..1 << primes.len())
        .filter(|mask| {
            on.iter()
                .all(|&v| (0..primes.len()).any(|i| mask >> i & 1 == 1 && primes[i].matches(v)))
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

fn table_from_cells(n: usize, m: usize, cells: &[Cell]) -> TruthTable {
    let rows = (0..1usize << n)
        .map(|v| cells[v * m..(v + 1) * m].to_vec())
        .collect();
    TruthTable::new(
        (0..n).map(|i| format!("X{i}")).collect(),
        (0..m).map(|k| format!("Y{k}")).collect(),
        rows,
    )
    .unwrap()
}

#[test]
fn all_three_input_functions_are_minimal_and_equivalent() {
    for f in 0u32..256 {
        let t = TruthTable::from_fn(&["A", "B", "C"], &["Z"], |v| vec![f >> v & 1 == 1]).unwrap();
        let care: Vec<bool> = (0..8).map(|v| f >> v & 1 == 1).collect();
        let primes = brute_primes(3, &care);
        assert_eq!(qm_prime_implicants(&t, 0), primes, "primes of f={f:#010b}");
        let sop = minimize(&t);
        assert!(check_equivalence(&sop, &t).unwrap().is_empty());
        assert_eq!(
            sop.terms.len(),
            brute_min_cover(&primes, &t.on_set(0)),
            "f={f:#010b}"
        );
    }
}

fn cell_strategy() -> impl Strategy<Value = Cell> {
    prop_oneof![4 => Just(Cell::Zero), 4 => Just(Cell::One), 1 => Just(Cell::DontCare)]
}

fn table_strategy() -> impl Strategy<Value = TruthTable> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(n, m)| {
        prop::collection::vec(cell_strategy(), (1 << n) * m)
            .prop_map(move |cells| table_from_cells(n, m, &cells))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn minimize_is_equivalent(t in table_strategy()) {
        let sop = minimize(&t);
        prop_assert!(check_equivalence(&sop, &t).unwrap().is_empty());
        for (k, uses) in sop.uses.iter().enumerate() {
            let mut sorted = uses.clone();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), uses.len(), "duplicate term in output {}", k);
        }
        for i in 0..sop.terms.len() {
            prop_assert!(sop.uses.iter().any(|u| u.contains(&i)), "unused pooled term");
        }
    }

    #[test]
    fn primes_are_prime(t in table_strategy()) {
        for k in 0..t.output_count() {
            for p in qm_prime_implicants(&t, k) {
                let care = |v: u32| t.cell(v, k) != Cell::Zero;
                prop_assert!(p.covered_minterms().iter().all(|&v| care(v)));
                for pos in 0..p.width() {
                    if p.literal(pos) == Literal::Absent { continue; }
                    let mut lits = p.literals();
                    lits[pos] = Literal::Absent;
                    let wider = Implicant::from_literals(&lits);
                    prop_assert!(!wider.covered_minterms().iter().all(|&v| care(v)));
                }
            }
        }
    }

    #[test]
    fn minimize_is_deterministic(t in table_strategy()) {
        let a = serde_json::to_string(&minimize(&t)).unwrap();
        let b = serde_json::to_string(&minimize(&t.clone())).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dont_cares_never_increase_term_count(t in table_strategy(), pick in any::<prop::sample::Index>()) {
        let cells: Vec<(u32, usize)> = (0..t.row_count() as u32)
            .flat_map(|v| (0..t.output_count()).map(move |k| (v, k)))
            .filter(|&(v, k)| t.cell(v, k) != Cell::DontCare)
            .collect();
        prop_assume!(!cells.is_empty());
        let (v, k) = cells[pick.index(cells.len())];
        let relaxed = t.with_cell(v, k, Cell::DontCare);
        prop_assert!(minimize(&relaxed).terms.len() <= minimize(&t).terms.len());
    }
}

#[test]
fn two_output_tables_share_terms_optimally() {
    // All 256 two-input, two-output tables against a brute-force search over
    // every subset of the nine cubes.
    let cubes = all_cubes(2);
    for code in 0u32..256 {
        let cells: Vec<Cell> = (0..8)
            .map(|i| {
                if code >> i & 1 == 1 {
                    Cell::One
                } else {
                    Cell::Zero
                }
            })
            .collect();
        let t = table_from_cells(2, 2, &cells);
        let best = (0u32..1 << cubes.len())
            .filter(|mask| {
                (0..2).all(|k| {
                    t.on_set(k).iter().all(|&v| {
                        (0..cubes.len()).any(|i| {
                            mask >> i & 1 == 1
                                && cubes[i].matches(v)
                                && cubes[i]
                                    .covered_minterms()
                                    .iter()
                                    .all(|&w| t.cell(w, k) == Cell::One)
                        })
                    })
                })
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap();
        let sop = minimize(&t);
        assert_eq!(sop.terms.len(), best, "table code {code:#010b}");
        assert!(check_equivalence(&sop, &t).unwrap().is_empty());
    }
}
