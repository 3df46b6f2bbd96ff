// temporary tuning harness, removed before release
use mantaray_core::geometry::{build_sections, loft, FullDesignVector, MeshResolution};
use mantaray_core::hydro::polar::{max_efficiency, polar};
use mantaray_core::hydro::{Fidelity, FlowConditions, HydroConfig};

fn eval(u: &FullDesignVector<f64>, label: &str) {
    let sections = build_sections(u);
    let mesh = loft(&sections, MeshResolution::default()).unwrap();
    let v = mantaray_core::geometry::enclosed_volume(&mesh).unwrap();
    let cond = FlowConditions::default();
    let cfg = HydroConfig::default();
    for fid in [Fidelity::Coarse, Fidelity::Fine] {
        let curve = polar(&mesh, &cond, &cfg, fid).unwrap();
        let peak = max_efficiency(&curve).unwrap();
        println!(
            "{label} fid={:?} V={v:.4} E_max={:.2} aoa*={:.1} L*={:.2} D*={:.3}",
            fid, peak.e_max, peak.aoa_star_deg, peak.lift, peak.drag
        );
        if fid == Fidelity::Coarse {
            for p in &curve.points {
                println!(
                    "   aoa={:5.1} L={:8.3} D={:7.4} E={:6.2}",
                    p.aoa_deg,
                    p.lift,
                    p.drag,
                    p.lift / p.drag
                );
            }
        }
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() > 1 {
        // candidate: root t, c; per section camber, pos, t, c, lex, ley, lez, twist, roll, yaw
        let vals: Vec<f64> = args[1..].iter().map(|s| s.parse().unwrap()).collect();
        let u = FullDesignVector::new(vals).unwrap();
        eval(&u, "candidate");
        return;
    }
    eval(&mantaray_core::geometry::baseline_design::<f64>(), "baseline");
}
