//! Writes an SVG of every gallery relation, plus prefix scatters of the finite
//! ones, into the directory given as the first argument (default `figures/`).
use std::path::PathBuf;

use relent::gallery::{gallery_entry, Params, NAMES};
use relent::plot::{prefix_svg, relation_svg, PlotOptions};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    for name in NAMES {
        let e = gallery_entry(name, &Params::default()).unwrap();
        let opts = PlotOptions { title: Some(e.description.into()), ..PlotOptions::default() };
        std::fs::write(dir.join(format!("{name}.svg")), relation_svg(&e.relation, &opts))?;
        if e.relation.as_points().is_some() {
            for m in 1..=3 {
                let svg = prefix_svg(&e.relation, m, &PlotOptions { title: Some(name.into()), ..PlotOptions::default() }).unwrap();
                std::fs::write(dir.join(format!("{name}_prefix_m{m}.svg")), svg)?;
            }
        }
    }
    println!("wrote figures to {}", dir.display());
    Ok(())
}
