//! Finger-path plots: the chart's points with each touch stroke drawn on
//! top, colored from red (early) to blue (late).

use std::fmt::Write;

use touchchart_core::geometry::data_to_screen;
use touchchart_core::interaction::Gesture;
use touchchart_core::{DataPos, Engine, InputEvent, ScreenPoint};

const PALETTE: [&str; 6] = ["#4c72b0", "#dd8452", "#55a868", "#8172b3", "#937860", "#da8bc3"];

/// Touch strokes: a touch_down starts one, moves extend it, touch_up ends
/// it. A move with no stroke open starts a new one.
pub fn strokes(events: &[InputEvent]) -> Vec<Vec<(u64, ScreenPoint)>> {
    let mut out: Vec<Vec<(u64, ScreenPoint)>> = Vec::new();
    let mut open = false;
    for e in events {
        match e.gesture {
            Gesture::TouchDown => {
                out.push(Vec::new());
                open = true;
                if let Some(p) = e.position.filter(|p| p.is_finite()) {
                    out.last_mut().unwrap().push((e.time, p));
                }
            }
            Gesture::TouchMove => {
                if !open {
                    out.push(Vec::new());
                    open = true;
                }
                if let Some(p) = e.position.filter(|p| p.is_finite()) {
                    out.last_mut().unwrap().push((e.time, p));
                }
            }
            Gesture::TouchUp => {
                if open {
                    if let Some(p) = e.position.filter(|p| p.is_finite()) {
                        out.last_mut().unwrap().push((e.time, p));
                    }
                }
                open = false;
            }
            _ => {}
        }
    }
    out.retain(|s| !s.is_empty());
    out
}

fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (220.0 * (1.0 - t) + 30.0 * t).round() as u8;
    let g = (40.0 * (1.0 - t) + 90.0 * t).round() as u8;
    let b = (40.0 * (1.0 - t) + 220.0 * t).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

pub fn render_trace_svg(engine: &Engine, events: &[InputEvent]) -> String {
    let screen = engine.config.screen;
    let vp = engine.model.full_viewport();
    let (w, h) = (screen.width, screen.height);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, "<title>{}</title>", escape(&engine.model.spec.title));
    // axes at the bottom and left edges
    let _ = writeln!(s, r##"<line x1="0" y1="{h}" x2="{w}" y2="{h}" stroke="#333" stroke-width="2"/>"##);
    let _ = writeln!(s, r##"<line x1="0" y1="0" x2="0" y2="{h}" stroke="#333" stroke-width="2"/>"##);
    let _ = writeln!(s, "<g>");
    for p in &engine.model.points {
        let q = data_to_screen(DataPos::new(p.x, p.y), &vp, screen);
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}" fill-opacity="0.6"/>"#,
            q.x,
            q.y,
            PALETTE[p.series_index % PALETTE.len()]
        );
    }
    let _ = writeln!(s, "</g>");
    let strokes = strokes(events);
    let t0 = strokes.first().map_or(0, |s| s[0].0);
    let t1 = strokes.last().map_or(0, |s| s[0].0);
    let span = (t1 - t0).max(1) as f64;
    let _ = writeln!(s, "<g fill=\"none\" stroke-width=\"3\" stroke-linecap=\"round\" stroke-linejoin=\"round\">");
    for stroke in &strokes {
        let color = ramp((stroke[0].0 - t0) as f64 / span);
        let mut d = String::new();
        for (i, (_, p)) in stroke.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, p.x, p.y);
        }
        if stroke.len() == 1 {
            // zero-length segment so a single tap still shows as a dot
            let _ = write!(d, " l0,0");
        }
        let _ = writeln!(s, r#"<path d="{d}" stroke="{color}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stroke_splitting() {
        let ev = [
            InputEvent::at(0, Gesture::TouchDown, 1.0, 1.0),
            InputEvent::at(10, Gesture::TouchMove, 2.0, 1.0),
            InputEvent::at(20, Gesture::TouchUp, 3.0, 1.0),
            InputEvent::new(30, Gesture::DoubleTap),
            InputEvent::at(40, Gesture::TouchMove, 5.0, 5.0),
            InputEvent::new(50, Gesture::TouchUp),
            InputEvent::new(60, Gesture::TouchUp),
        ];
        let s = strokes(&ev);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].len(), 3);
        assert_eq!(s[1].len(), 1);
    }

    #[test]
    fn ramp_ends() {
        assert_eq!(ramp(0.0), "#dc2828");
        assert_eq!(ramp(1.0), "#1e5adc");
    }
}
