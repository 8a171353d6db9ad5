//! Green-ring identities on random modules: commutativity and
//! associativity of the tensor product up to isomorphism, monoidality of
//! the dual, compatibility of restriction, and the two summand theorems
//! (trivial-summand criterion and M | M (x) M* (x) M).

use modrep::config::RunConfig;
use modrep::decomp::{decompose, is_absolutely_indecomposable, strip_projectives};
use modrep::hom::{hom_space, is_isomorphic};
use modrep::rep::{Module, SubgroupSpec};
use modrep::testkit::{random_abs_indec, random_module, sample_modules};

fn cfg() -> RunConfig {
    RunConfig::default()
}

#[test]
fn tensor_is_commutative_and_associative_up_to_iso() {
    let cfg = cfg();
    let mods = sample_modules(&cfg, 0x7e501, 6, 3, 4);
    for chunk in mods.chunks(3) {
        if chunk.len() < 3 {
            continue;
        }
        let (a, b, c) = (&chunk[0], &chunk[1], &chunk[2]);
        let ab = a.tensor(b).unwrap();
        let ba = b.tensor(a).unwrap();
        assert!(is_isomorphic(&ab, &ba, &cfg).unwrap());
        let abc1 = ab.tensor(c).unwrap();
        let abc2 = a.tensor(&b.tensor(c).unwrap()).unwrap();
        assert!(is_isomorphic(&abc1, &abc2, &cfg).unwrap());
    }
}

#[test]
fn trivial_is_a_tensor_unit() {
    let cfg = cfg();
    for m in sample_modules(&cfg, 0x7e502, 4, 3, 5) {
        let k = Module::trivial(m.group(), m.field().clone()).unwrap();
        assert!(is_isomorphic(&k.tensor(&m).unwrap(), &m, &cfg).unwrap());
        assert!(is_isomorphic(&m.tensor(&k).unwrap(), &m, &cfg).unwrap());
    }
}

#[test]
fn dual_is_monoidal_and_involutive() {
    let cfg = cfg();
    let mods = sample_modules(&cfg, 0x7e503, 6, 3, 4);
    for chunk in mods.chunks(2) {
        if chunk.len() < 2 {
            continue;
        }
        let (m, n) = (&chunk[0], &chunk[1]);
        let lhs = m.tensor(n).unwrap().dual();
        let rhs = m.dual().tensor(&n.dual()).unwrap();
        assert!(is_isomorphic(&lhs, &rhs, &cfg).unwrap());
        assert!(is_isomorphic(&m.dual().dual(), m, &cfg).unwrap());
        assert_eq!(m.dual().dim(), m.dim());
    }
}

#[test]
fn restriction_commutes_with_tensor_and_dual() {
    let cfg = cfg();
    let mods = sample_modules(&cfg, 0x7e504, 6, 3, 3);
    let h = SubgroupSpec::new(mods[0].group(), vec![vec![1, 1]]).unwrap();
    for chunk in mods.chunks(2) {
        if chunk.len() < 2 {
            continue;
        }
        let (m, n) = (&chunk[0], &chunk[1]);
        let lhs = m.tensor(n).unwrap().restrict(&h).unwrap();
        let rhs = m.restrict(&h).unwrap().tensor(&n.restrict(&h).unwrap()).unwrap();
        assert!(is_isomorphic(&lhs, &rhs, &cfg).unwrap());
        let dl = m.dual().restrict(&h).unwrap();
        let dr = m.restrict(&h).unwrap().dual();
        assert!(is_isomorphic(&dl, &dr, &cfg).unwrap());
    }
}

#[test]
fn hom_dimension_is_conjugation_invariant() {
    let cfg = cfg();
    let mut rng = cfg.rng(0x7e505);
    for _ in 0..4 {
        let m = random_module(3, 3, &mut rng);
        let n = random_module(3, 4, &mut rng);
        let d = hom_space(&m, &n).unwrap().dim();
        let p = modrep::testkit::random_invertible(m.field(), 3, &mut rng);
        let q = modrep::testkit::random_invertible(m.field(), 4, &mut rng);
        let mc = m.conjugate(&p).unwrap();
        let nc = n.conjugate(&q).unwrap();
        assert_eq!(hom_space(&mc, &nc).unwrap().dim(), d);
    }
}

/// Multiplicity of the trivial module among the summands.
fn trivial_multiplicity(m: &Module, cfg: &RunConfig) -> usize {
    let d = decompose(m, cfg);
    d.summands
        .iter()
        .filter(|(s, _)| s.dim() == 1 && s.gens().iter().all(|g| g.is_zero()))
        .map(|(_, c)| *c)
        .sum()
}

#[test]
fn trivial_summand_criterion_small() {
    let cfg = cfg();
    let mut rng = cfg.rng(0x7e506);
    for i in 0..8 {
        let m = random_abs_indec(3, 1..=5, &mut rng);
        let n = if i % 2 == 0 { m.dual() } else { random_abs_indec(3, 1..=5, &mut rng) };
        let t = m.tensor(&n).unwrap();
        let mult = trivial_multiplicity(&t, &cfg);
        let expected = m.dim() % 3 != 0 && is_isomorphic(&m, &n.dual(), &cfg).unwrap();
        assert_eq!(mult > 0, expected, "trivial-summand criterion failed (dim {})", m.dim());
        if expected {
            assert_eq!(mult, 1, "trivial summand must have multiplicity one");
        }
        if m.dim() % 3 == 0 {
            for (s, _) in decompose(&t, &cfg).summands {
                assert_eq!(s.dim() % 3, 0, "summand dimension not divisible by p");
            }
        }
    }
}

#[test]
fn module_divides_m_mstar_m() {
    let cfg = cfg();
    let mut rng = cfg.rng(0x7e507);
    for _ in 0..4 {
        let m = random_abs_indec(3, 2..=4, &mut rng);
        let triple = m.tensor(&m.dual()).unwrap().tensor(&m).unwrap();
        let d = decompose(&triple, &cfg);
        let mult: usize = d
            .summands
            .iter()
            .filter(|(s, _)| s.dim() == m.dim() && is_isomorphic(s, &m, &cfg).unwrap())
            .map(|(_, c)| *c)
            .sum();
        assert!(mult >= 1, "M must divide M (x) M* (x) M");
        if m.dim() % 3 == 0 {
            assert!(mult >= 2, "doubled summand expected when p | dim M");
        }
    }
}

#[test]
fn direct_sum_decomposition_is_additive() {
    let cfg = cfg();
    let mut rng = cfg.rng(0x7e508);
    for _ in 0..4 {
        let m = random_module(3, 3, &mut rng);
        let n = random_module(3, 4, &mut rng);
        let sum = m.direct_sum(&n).unwrap();
        let dm = decompose(&m, &cfg);
        let dn = decompose(&n, &cfg);
        let ds = decompose(&sum, &cfg);
        // multiset union of the parts equals the decomposition of the sum
        let mut expected: Vec<(Module, usize)> = dm.summands;
        for (s, c) in dn.summands {
            if let Some(e) = expected
                .iter_mut()
                .find(|(r, _)| r.dim() == s.dim() && is_isomorphic(r, &s, &cfg).unwrap())
            {
                e.1 += c;
            } else {
                expected.push((s, c));
            }
        }
        assert_eq!(ds.summands.iter().map(|x| x.1).sum::<usize>(), expected.iter().map(|x| x.1).sum::<usize>());
        for (s, c) in &ds.summands {
            let hit = expected
                .iter()
                .find(|(r, _)| r.dim() == s.dim() && is_isomorphic(r, s, &cfg).unwrap());
            assert_eq!(hit.map(|(_, k)| *k), Some(*c));
        }
    }
}

#[test]
fn strip_is_sound_on_padded_modules() {
    let cfg = cfg();
    let mut rng = cfg.rng(0x7e509);
    for _ in 0..3 {
        let m = random_module(3, 4, &mut rng);
        let reg = Module::regular(m.group(), m.field().clone()).unwrap();
        let padded = m.direct_sum(&reg).unwrap().direct_sum(&reg).unwrap();
        let (core_m, f_m) = strip_projectives(&m);
        let (core_p, f_p) = strip_projectives(&padded);
        assert_eq!(f_p, f_m + 2);
        assert!(is_isomorphic(&core_m, &core_p, &cfg).unwrap());
    }
}

#[test]
fn abs_indec_flags_are_conjugation_invariant() {
    let cfg = cfg();
    let mut rng = cfg.rng(0x7e50a);
    for _ in 0..4 {
        let m = random_module(3, 4, &mut rng);
        let p = modrep::testkit::random_invertible(m.field(), 4, &mut rng);
        let c = m.conjugate(&p).unwrap();
        assert_eq!(
            modrep::decomp::is_indecomposable(&m),
            modrep::decomp::is_indecomposable(&c)
        );
        assert_eq!(is_absolutely_indecomposable(&m), is_absolutely_indecomposable(&c));
    }
}
