//! Integrates one heading profile in still and moving air and compares the
//! energy against the affine time/displacement prediction, then runs the
//! randomized study.

use ldtsp::energy::{affine_prediction, build_power_model, identity_study, simulate, HeadingProfile, KinematicState, STUDY_DRAG};
use ldtsp::rng::Stream;

fn main() {
    let mut stream = Stream::new(7);
    let profile = HeadingProfile::random(&mut stream, 8, 5.0);
    for vw in [0.0, 1.0] {
        let model = build_power_model(STUDY_DRAG[0], 2.0, vw).expect("valid parameters");
        let t = simulate(&model, &profile, KinematicState::default(), 5.0 / 1e4).expect("valid step");
        let predicted = affine_prediction(&model, t.elapsed, t.end.x);
        println!("vw={vw}: integrated {:.9} predicted {:.9} dx {:.4}", t.energy, predicted, t.end.x);
    }
    let r = identity_study(100, 1).expect("study runs");
    println!(
        "100 profiles: max relative residual {:e} (moving), {:e} (still)",
        r.max_relative_moving, r.max_relative_still
    );
}
