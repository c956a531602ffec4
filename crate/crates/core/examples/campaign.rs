//! A small verification campaign run from code, written as a JSON report.

use polyharmonia::campaign::{run_all, CampaignConfig};

fn main() -> polyharmonia::Result<()> {
    let config = CampaignConfig {
        groups: vec!["so:4".into(), "soo:2,2".into()],
        orders: vec![1, 2],
        samples: 10,
        centers: 20,
        ..CampaignConfig::default()
    };
    let report = run_all(&config)?;
    let path = std::env::temp_dir().join("polyharmonia-campaign.json");
    report.write_atomic(&path)?;
    println!(
        "{} basis, {} eigen, {} harmonic, {} ode records: {:?} -> {}",
        report.basis.len(),
        report.eigen.len(),
        report.harmonic.len(),
        report.ode.len(),
        report.overall,
        path.display()
    );
    Ok(())
}
