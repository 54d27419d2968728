//! Graphviz DOT renderings of the network fabric.
//!
//! The diagram has one node per (stage boundary, line) named `b{b}_l{l}`
//! and one cluster per switching element, holding the two lines the switch
//! drives at the next boundary. Gray edges show the reachable fabric (each
//! line feeds the two outputs of the switch behind the shuffle); colored
//! edges overlay message paths. Lines carrying two or more messages are
//! filled red and their incoming path edges dashed; switches hosting a
//! switch conflict get a red border.

use std::collections::BTreeSet;

use crate::conflict::{link_conflicts, switch_conflicts, MessageSet};
use crate::topology::{simulate_path, Address, NetworkConfig};

const PALETTE: [&str; 8] = [
    "#1b6ca8", "#b3541e", "#2e7d32", "#7b1fa2", "#c2185b", "#00796b", "#5d4037", "#455a64",
];

fn node_name(boundary: u32, line: u32) -> String {
    format!("b{boundary}_l{line}")
}

fn push_header(out: &mut String, cfg: &NetworkConfig) {
    out.push_str("digraph omega {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, fontsize=10, width=0.4, height=0.25];\n");
    out.push_str(&format!(
        "  label=\"omega network, {} ports, {} stages\";\n",
        cfg.size(),
        cfg.stages()
    ));
}

fn push_nodes_and_clusters(
    out: &mut String,
    cfg: &NetworkConfig,
    hot_lines: &BTreeSet<(u32, u32)>,
    hot_switches: &BTreeSet<(u32, u32)>,
) {
    let n = cfg.stages();
    let bits = |v: u32| format!("{v:0w$b}", w = n as usize);
    for line in 0..cfg.size() as u32 {
        out.push_str(&format!(
            "  {} [label=\"{}\"];\n",
            node_name(0, line),
            bits(line)
        ));
    }
    for stage in 0..n {
        for switch in 0..cfg.switches_per_stage() as u32 {
            out.push_str(&format!("  subgraph cluster_s{stage}_{switch} {{\n"));
            out.push_str(&format!("    label=\"s{stage}.{switch}\"; fontsize=9;\n"));
            if hot_switches.contains(&(stage, switch)) {
                out.push_str("    color=red; penwidth=2;\n");
            } else {
                out.push_str("    color=gray;\n");
            }
            for low in [0u32, 1] {
                let line = 2 * switch + low;
                let name = node_name(stage + 1, line);
                if hot_lines.contains(&(stage + 1, line)) {
                    out.push_str(&format!(
                        "    {name} [label=\"{}\", style=filled, fillcolor=\"#ffc4c4\", color=red];\n",
                        bits(line)
                    ));
                } else {
                    out.push_str(&format!("    {name} [label=\"{}\"];\n", bits(line)));
                }
            }
            out.push_str("  }\n");
        }
    }
}

fn push_fabric_edges(out: &mut String, cfg: &NetworkConfig) {
    for boundary in 0..cfg.stages() {
        for line in 0..cfg.size() as u32 {
            let shuffled = crate::topology::shuffle(Address(line), cfg)
                .expect("line is in range")
                .0;
            for target in [shuffled & !1, shuffled | 1] {
                out.push_str(&format!(
                    "  {} -> {} [color=gray80, arrowsize=0.4];\n",
                    node_name(boundary, line),
                    node_name(boundary + 1, target)
                ));
            }
        }
    }
}

/// The bare fabric: every line, switch, and possible hop.
pub fn network_diagram(cfg: &NetworkConfig) -> String {
    let mut out = String::new();
    push_header(&mut out, cfg);
    push_nodes_and_clusters(&mut out, cfg, &BTreeSet::new(), &BTreeSet::new());
    push_fabric_edges(&mut out, cfg);
    out.push_str("}\n");
    out
}

/// The fabric with every message's path overlaid and conflicts highlighted.
pub fn message_diagram(ms: &MessageSet) -> String {
    let cfg = ms.config();
    let hot_lines: BTreeSet<(u32, u32)> = link_conflicts(ms)
        .occurrences
        .iter()
        .map(|o| (o.boundary, o.line))
        .collect();
    let hot_switches: BTreeSet<(u32, u32)> = switch_conflicts(ms)
        .occurrences
        .iter()
        .map(|o| (o.stage, o.switch))
        .collect();

    let mut out = String::new();
    push_header(&mut out, cfg);
    push_nodes_and_clusters(&mut out, cfg, &hot_lines, &hot_switches);
    push_fabric_edges(&mut out, cfg);

    for (i, &(s, d)) in ms.entries().iter().enumerate() {
        let path = simulate_path(s, d, cfg).expect("message set addresses are validated");
        let color = PALETTE[i % PALETTE.len()];
        for b in 0..cfg.stages() as usize {
            let head_hot = hot_lines.contains(&(b as u32 + 1, path.links[b + 1]));
            let style = if head_hot { ", style=dashed" } else { "" };
            out.push_str(&format!(
                "  {} -> {} [color=\"{}\", penwidth=2{}];\n",
                node_name(b as u32, path.links[b]),
                node_name(b as u32 + 1, path.links[b + 1]),
                color,
                style
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::NetworkConfig;

    fn cfg8() -> NetworkConfig {
        NetworkConfig::new(8).unwrap()
    }

    fn link_instance() -> MessageSet {
        MessageSet::permutation(cfg8(), &[5, 1, 3, 6, 0, 2, 4, 7]).unwrap()
    }

    #[test]
    fn network_diagram_basic_shape() {
        let dot = network_diagram(&cfg8());
        assert!(dot.starts_with("digraph omega {"));
        assert!(dot.trim_end().ends_with('}'));
        assert_eq!(dot.matches("subgraph cluster_").count(), 12);
        // every line appears at every boundary
        for b in 0..=3 {
            for l in 0..8 {
                assert!(dot.contains(&format!("b{b}_l{l} [")), "missing b{b}_l{l}");
            }
        }
        // two fabric hops per line per stage
        assert_eq!(dot.matches("->").count(), 48);
        assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    }

    #[test]
    fn message_diagram_overlays_paths_and_conflicts() {
        let dot = message_diagram(&link_instance());
        // 48 fabric hops plus 3 hops for each of the 8 messages
        assert_eq!(dot.matches("->").count(), 72);
        // source 011 enters boundary 1 on line 111
        assert!(dot.contains("b0_l3 -> b1_l7 [color="));
        // lines 010 and 111 carry two messages after stage 0
        assert!(dot.contains("b1_l2 [label=\"010\", style=filled"));
        assert!(dot.contains("b1_l7 [label=\"111\", style=filled"));
        // sources 001 and 101 meet in switch 1 of stage 0
        let cluster = dot.split("cluster_s0_1").nth(1).unwrap();
        assert!(cluster
            .trim_start()
            .starts_with("{\n    label=\"s0.1\"; fontsize=9;\n    color=red"));
        // shared lines make the incoming path edges dashed
        assert!(dot.contains("b1_l7 ["));
        assert!(dot.matches("style=dashed").count() >= 4);
    }

    #[test]
    fn diagrams_are_deterministic() {
        assert_eq!(network_diagram(&cfg8()), network_diagram(&cfg8()));
        let ms = link_instance();
        assert_eq!(message_diagram(&ms), message_diagram(&ms));
    }

    #[test]
    fn clean_sets_show_no_conflict_styling() {
        let ms = MessageSet::new(
            cfg8(),
            vec![(crate::topology::Address(0), crate::topology::Address(0))],
        )
        .unwrap();
        let dot = message_diagram(&ms);
        assert!(!dot.contains("style=filled"));
        assert!(!dot.contains("color=red"));
        assert_eq!(dot.matches("penwidth=2]").count(), 3);
    }
}
