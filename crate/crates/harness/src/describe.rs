use std::fmt::Write;

use touchchart_core::narration::{describe_node, NavContext, RepeatCache};
use touchchart_core::tree::Level;
use touchchart_core::{Engine, NodeId};

fn level_name(level: Level) -> &'static str {
    match level {
        Level::Overview => "overview",
        Level::Zone => "zone",
        Level::Bin => "bin",
        Level::SeriesInBin => "series",
        Level::Cell => "cell",
        Level::Point => "point",
        Level::FilterToggle => "filter",
    }
}

/// The semantic tree as indented text, two spaces per level.
pub fn describe_tree(engine: &Engine) -> String {
    let visible = vec![true; engine.model.series_count()];
    let cache = RepeatCache::new();
    let mut out = String::new();
    let mut stack: Vec<(NodeId, usize)> = vec![(engine.tree.root(), 0)];
    while let Some((id, depth)) = stack.pop() {
        let node = engine.tree.node(id);
        let label = describe_node(
            &engine.model,
            &engine.tree,
            id,
            NavContext::new_position(None),
            &cache,
            &visible,
            None,
        );
        let _ = writeln!(out, "{}[{}] {}", "  ".repeat(depth), level_name(node.level), label);
        for &child in node.children.iter().rev() {
            stack.push((child, depth + 1));
        }
    }
    out
}
