#![allow(dead_code)]

use rand::Rng;
use touchchart_core::interaction::{
    FlickDirection, Gesture, HoldMove, InputEvent, PageDirection, Rotation, SwipeDirection,
};
use touchchart_core::ScreenPoint;

fn pos<R: Rng>(rng: &mut R) -> ScreenPoint {
    ScreenPoint::new(rng.gen_range(-20.0..410.0), rng.gen_range(-20.0..864.0))
}

/// Random events with non-decreasing times.
pub fn random_events<R: Rng>(rng: &mut R, n: usize) -> Vec<InputEvent> {
    let mut time = 0u64;
    (0..n).map(|_| random_event(rng, &mut time)).collect()
}

pub fn random_event<R: Rng>(rng: &mut R, time: &mut u64) -> InputEvent {
    *time += rng.gen_range(0..150);
    let gesture = match rng.gen_range(0..30) {
        0..=5 => Gesture::TouchDown,
        6..=13 => Gesture::TouchMove,
        14..=16 => Gesture::TouchUp,
        17..=18 => Gesture::Swipe {
            direction: [SwipeDirection::Left, SwipeDirection::Right, SwipeDirection::Up, SwipeDirection::Down]
                [rng.gen_range(0..4)],
        },
        19..=20 => Gesture::DoubleTap,
        21 => Gesture::DoubleTapHoldMove {
            direction: [HoldMove::Up, HoldMove::Down, HoldMove::Left, HoldMove::Right, HoldMove::Hold]
                [rng.gen_range(0..5)],
        },
        22 => Gesture::ZScrub,
        23 => Gesture::RotorRotate {
            direction: if rng.gen() { Rotation::Cw } else { Rotation::Ccw },
        },
        24 => Gesture::RotorFlick {
            direction: if rng.gen() { FlickDirection::Up } else { FlickDirection::Down },
        },
        25..=26 => Gesture::Pinch {
            scale: rng.gen_range(0.3..3.0),
            focus: pos(rng),
        },
        27 => Gesture::SplitTap,
        _ => Gesture::ThreeFingerSwipe {
            direction: if rng.gen() { PageDirection::Left } else { PageDirection::Right },
        },
    };
    let position = match gesture {
        Gesture::TouchDown | Gesture::TouchMove | Gesture::SplitTap => Some(pos(rng)),
        Gesture::TouchUp if rng.gen_bool(0.7) => Some(pos(rng)),
        _ => None,
    };
    InputEvent {
        time: *time,
        position,
        gesture,
    }
}
