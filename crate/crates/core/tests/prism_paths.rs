use bsgraph::graph::distance;
use bsgraph::prisms::{
    check_table1_entry, cover, ham_path_in_prism, p6_form, prism_of, table1_paths, PrismId,
    PrismPathBuilder,
};
use bsgraph::{sjt_cycle, Error, Permutation};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn every_opposite_parity_pair_at_five() {
    let builder = PrismPathBuilder::with_sjt(5).unwrap();
    let mut built = 0;
    for prism in cover(5).unwrap() {
        let verts = prism.vertices();
        for pi in &verts {
            for tau in &verts {
                let res = builder.build(prism, pi, tau);
                if pi.parity() == tau.parity() {
                    assert!(matches!(res, Err(Error::SameParity(..))));
                } else {
                    let path = res.unwrap();
                    path.validate().unwrap();
                    assert_eq!((path.start(), path.end()), (pi, tau));
                    built += 1;
                }
            }
        }
    }
    // 10 prisms, 12 vertices each, 6 opposite-parity partners per vertex.
    assert_eq!(built, 10 * 12 * 6);
}

#[test]
fn sampled_pairs_at_six_and_seven() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [6, 7] {
        let builder = PrismPathBuilder::with_sjt(n).unwrap();
        for prism in cover(n).unwrap() {
            let verts = prism.vertices();
            let mut done = 0;
            while done < 50 {
                let pi = verts.choose(&mut rng).unwrap();
                let tau = verts.choose(&mut rng).unwrap();
                if pi.parity() == tau.parity() {
                    assert!(builder.build(prism, pi, tau).is_err());
                    continue;
                }
                builder.build(prism, pi, tau).unwrap().validate().unwrap();
                done += 1;
            }
        }
    }
}

#[test]
fn mirror_copy_follows_the_base_cycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in 5..=7 {
        let base = sjt_cycle(n - 2).unwrap();
        let all: Vec<Permutation> = Permutation::all(n).unwrap().collect();
        let starts: Vec<&Permutation> = if n == 5 {
            all.iter().collect()
        } else {
            all.choose_multiple(&mut rng, 40).collect()
        };
        for pi in starts {
            let walk = base.trace(pi).unwrap();
            for (s, &g) in base.indices().iter().enumerate() {
                let mirror = walk[s].apply_gen(n - 1).unwrap();
                let next_mirror = walk[s + 1].apply_gen(n - 1).unwrap();
                assert_eq!(mirror.apply_gen(g).unwrap(), next_mirror);
            }
        }
    }
}

#[test]
fn six_prism_paths_to_every_odd_distance_vertex() {
    // The generalized prism {4,5} of BS_5 is the 6-prism P6(4,2) through the identity.
    let id = Permutation::identity(5).unwrap();
    let p6 = p6_form(4, 2, 5).unwrap();
    let prism = prism_of(&id).unwrap();
    let mut p6_verts = p6.trace(&id).unwrap();
    p6_verts.pop();
    p6_verts.sort();
    assert_eq!(p6_verts, prism.vertices());

    let base = sjt_cycle(3).unwrap();
    for pi in prism.vertices() {
        for tau in prism.vertices() {
            if distance(&pi, &tau).unwrap() % 2 == 1 {
                let path = ham_path_in_prism(prism, &pi, &tau, &base).unwrap();
                path.validate().unwrap();
            }
        }
    }
}

#[test]
fn table1_validates_in_p6_4_2() {
    let entries = table1_paths(4, 2, 5).unwrap();
    assert_eq!(entries.len(), 38);
    for pi in PrismId::new(5, 4, 5).unwrap().vertices() {
        for e in &entries {
            check_table1_entry(&pi, e, 4, 2).unwrap();
        }
    }
}

#[test]
fn table1_validates_for_other_prism_shapes() {
    // P6(1,4) in BS_5: the hexagon on b_3, b_4 with b_1 rungs.
    let entries = table1_paths(1, 4, 5).unwrap();
    let id = Permutation::identity(5).unwrap();
    for e in &entries {
        check_table1_entry(&id, e, 1, 4).unwrap();
    }
}
