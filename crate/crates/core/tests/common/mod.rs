#![allow(dead_code)]

use rand::Rng;
use touchchart_core::interaction::{
    FlickDirection, Gesture, HoldMove, InputEvent, PageDirection, Rotation, SwipeDirection,
};
use touchchart_core::model::{ChartSpec, DataPoint, XKind};
use touchchart_core::{ChartKind, ChartModel, Engine, EngineConfig, ScreenPoint};

pub fn spec(kind: ChartKind, x_kind: XKind, series: &[&str]) -> ChartSpec {
    ChartSpec {
        kind,
        title: "Test".into(),
        x_label: "x".into(),
        y_label: "y".into(),
        x_kind,
        series_names: series.iter().map(|s| s.to_string()).collect(),
        x_column: "x".into(),
        y_column: "y".into(),
        series_column: (series.len() > 1).then(|| "s".into()),
    }
}

pub fn random_scatter<R: Rng>(rng: &mut R, n: usize, series: usize) -> ChartModel {
    let names: Vec<String> = (0..series).map(|i| format!("s{i}")).collect();
    let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let points = (0..n)
        .map(|_| DataPoint {
            x: rng.gen_range(-50.0..50.0),
            y: rng.gen_range(0.0..10.0),
            series_index: rng.gen_range(0..series),
        })
        .collect();
    ChartModel::from_points(spec(ChartKind::Scatter, XKind::Numeric, &names), points, vec![]).unwrap()
}

pub fn random_line<R: Rng>(rng: &mut R, n: usize, series: usize) -> ChartModel {
    let names: Vec<String> = (0..series).map(|i| format!("s{i}")).collect();
    let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut points = Vec::new();
    for s in 0..series {
        for i in 0..n {
            points.push(DataPoint {
                x: 19000.0 + i as f64,
                y: rng.gen_range(-5.0..100.0),
                series_index: s,
            });
        }
    }
    ChartModel::from_points(spec(ChartKind::Line, XKind::Temporal, &names), points, vec![]).unwrap()
}

pub fn engine(model: ChartModel) -> Engine {
    let cfg = EngineConfig::defaults_for(&model);
    Engine::new(model, cfg)
}

fn pos<R: Rng>(rng: &mut R) -> ScreenPoint {
    // mostly on screen, sometimes outside it
    ScreenPoint::new(rng.gen_range(-20.0..410.0), rng.gen_range(-20.0..864.0))
}

/// One random event; `time` advances by 0..150 ms.
pub fn random_event<R: Rng>(rng: &mut R, time: &mut u64) -> InputEvent {
    *time += rng.gen_range(0..150);
    let t = *time;
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
    InputEvent { time: t, position, gesture }
}
