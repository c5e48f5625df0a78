mod common;

use bvtk::diagram::{paths_into, validate};
use bvtk::families::{
    cycle, dm2ww, fig1_family, gj, gj_modified, gj_modified_path, gj_modified_with_splits, kite_deterministic,
    kite_nondet_depth, mc_component, odometer_single, odometer_suo, split_path, split_vertex,
};
use common::{all_paths, random_diagram};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn gj_dimensions() {
    let d = gj(8).unwrap();
    let dims: Vec<u64> = (1..=8).map(|n| d.dim(n, 0)).collect();
    assert_eq!(dims, vec![1, 2, 8, 48, 384, 3840, 46080, 645120]);
    for n in 1..=8 {
        assert_eq!(d.width(n), 2 * n);
        assert!((0..d.width(n)).all(|v| d.dim(n, v) == d.dim(n, 0)));
    }
    assert!(gj(1).is_err());
    assert_eq!(mc_component(1), None);
    assert_eq!((mc_component(4), mc_component(5)), (Some(2), Some(2)));
}

#[test]
fn dm2ww_differs_only_in_order() {
    let (g, d) = (gj(7).unwrap(), dm2ww(7).unwrap());
    for n in 1..=7 {
        for v in 0..g.width(n) {
            let mut a = g.in_edges(n, v).to_vec();
            let mut b = d.in_edges(n, v).to_vec();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
    assert!(validate(&d).properly_ordered_at_horizon);
    assert!(dm2ww(4).is_err());
}

#[test]
fn splitting_is_a_bijection_on_paths() {
    let mut rng = StdRng::seed_from_u64(61);
    let mut done = 0;
    while done < 40 {
        let d = random_diagram(&mut rng, 5);
        let top = d.depth();
        let n = rng.gen_range(1..=top);
        let v = rng.gen_range(0..d.width(n));
        let deg = d.in_degree(n, v);
        if deg < 2 {
            continue;
        }
        let t = rng.gen_range(1..deg);
        let s = split_vertex(&d, n, v, t).unwrap();
        let mut imgs: Vec<_> = all_paths(&d, top).iter().map(|p| split_path(&d, n, v, t, p)).collect();
        for q in &imgs {
            q.check(&s).unwrap();
        }
        imgs.sort_by_key(|q| (q.verts.clone(), q.ords.clone()));
        let mut want = all_paths(&s, top);
        want.sort_by_key(|q| (q.verts.clone(), q.ords.clone()));
        assert_eq!(imgs, want);
        // order inside each top vertex is kept
        if n < top {
            for w in 0..d.width(top) {
                let ps = paths_into(&d, top, w);
                let dots: Vec<u64> = ps.iter().map(|p| split_path(&d, n, v, t, p).dot(&s, top)).collect();
                assert!(dots.windows(2).all(|x| x[1] == x[0] + 1));
            }
        }
        done += 1;
    }
    let d = gj(3).unwrap();
    assert!(split_vertex(&d, 3, 0, 0).is_err());
    assert!(split_vertex(&d, 3, 0, 4).is_err());
}

#[test]
fn gj_modified_splits_off_the_first_column() {
    let n = 5;
    let (m, splits) = gj_modified_with_splits(n).unwrap();
    assert_eq!(splits.len(), (2..=n).map(|j| j - 1).sum::<usize>());
    let g = gj(n).unwrap();
    for s in &splits {
        let first = m.find(s.level, &format!("{}'", s.name)).unwrap();
        assert_eq!(m.dim(s.level, first), g.dim(s.level - 1, 0));
    }
    assert_eq!(gj_modified(n).unwrap(), m);
    for p in paths_into(&g, n, 0).iter().step_by(13) {
        gj_modified_path(n, p).unwrap().check(&m).unwrap();
    }
}

#[test]
fn small_families() {
    let o = odometer_single(&[2, 3]).unwrap();
    assert_eq!(o.dim(2, 0), 6);
    assert!(odometer_single(&[1]).is_err());
    let s = odometer_suo(&[2, 3, 2]).unwrap();
    assert_eq!((s.width(3), s.dim(3, 1)), (2, 6));
    assert_eq!(cycle(&[2, 3], 5), vec![2, 3, 2, 3, 2]);
    let f = fig1_family(5).unwrap();
    assert_eq!(f.width(4), 4);
    assert_eq!(f.name(5, 0), "A");
    assert!(fig1_family(2).is_err());
    let k = kite_nondet_depth(6).unwrap();
    assert_eq!((1..=6).map(|n| k.width(n)).collect::<Vec<_>>(), vec![3, 3, 2, 1, 1, 1]);
    assert!(kite_deterministic(&[2, 3], 4).is_err());
    assert!(kite_deterministic(&[3, 2], 1).is_err());
}
