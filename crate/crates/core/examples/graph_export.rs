//! Writes a transformed lattice in the line-oriented graph text format.
//!
//! cargo run --example graph_export -- [size] [p] > lattice.txt

use secrecy_percolation::lattice::{read_graph_text, strategy_graph, write_graph_text, Strategy};

fn main() -> secrecy_percolation::Result<()> {
    let mut args = std::env::args().skip(1);
    let size: usize = args.next().map_or(8, |s| s.parse().expect("size"));
    let p: f64 = args.next().map_or(0.2, |s| s.parse().expect("p"));

    let g = strategy_graph(Strategy::Transformed, size, p)?;
    let text = write_graph_text(&g)?;
    let parsed = read_graph_text(&text)?;
    eprintln!("{} nodes, {} edges", parsed.nodes.len(), parsed.edges.len());
    print!("{text}");
    Ok(())
}
