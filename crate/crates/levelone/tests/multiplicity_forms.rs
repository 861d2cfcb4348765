mod common;

use common::closed_forms::{expected, possible, ranges};
use levelone::arthur::{enumerate_shapes, multiplicity};

#[test]
fn sign_computation_matches_closed_forms_on_every_shape() {
    for (g, targets) in ranges() {
        let mut seen = 0;
        for t in targets {
            for p in enumerate_shapes(g, &t).unwrap().into_iter().filter(possible) {
                let want = expected(&p, &t).unwrap_or_else(|| panic!("{} at {:?}: no closed form", p.render(None), t));
                assert_eq!(multiplicity(&p), want, "{} at {:?}", p.render(None), t);
                seen += 1;
            }
        }
        assert!(seen > 1000, "{}: {} shapes", g, seen);
    }
}
