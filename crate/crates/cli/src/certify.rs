use std::time::Instant;

use secant_core::horace::{main_theorem_certify, CertificateNode, CertifyOptions, Status};

use crate::args::{Common, Format};
use crate::output::{cell, csv_table, Report};
use crate::CliError;

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::BoundOnly => "bound-only",
        Status::Failed => "failed",
    }
}

fn node_rows(node: &CertificateNode, depth: usize, out: &mut Vec<Vec<String>>) {
    let rule = serde_json::to_value(node.rule).map(|v| cell(&v)).unwrap_or_default();
    let relation = serde_json::to_value(node.relation).map(|v| cell(&v)).unwrap_or_default();
    out.push(vec![
        depth.to_string(),
        node.label.clone(),
        node.scheme.clone(),
        node.degree.to_string(),
        rule,
        node.claimed.to_string(),
        node.computed.map(|v| v.to_string()).unwrap_or_default(),
        relation,
        status_name(node.status).to_string(),
        node.notes.join("; "),
    ]);
    for c in &node.children {
        node_rows(c, depth + 1, out);
    }
}

pub fn certify(common: &Common, n: u32, s: u64, cap: u64, allow_bound_only: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let opts = CertifyOptions { sampling: common.sampling(), direct_cap: cap };
    let cert = main_theorem_certify(n, s, &opts)?;
    let matches = match cert.status {
        Status::Verified => true,
        Status::BoundOnly => allow_bound_only,
        Status::Failed => false,
    };
    let mut summary = format!(
        "certify n = {n}, s = {s}: root claim dim (I_X)_{n} = {}, status {} ({} nodes)",
        cert.root.claimed,
        status_name(cert.status),
        cert.root.size()
    );
    if cert.status == Status::BoundOnly && !allow_bound_only {
        summary.push_str("; bound-only nodes need --allow-bound-only");
    }
    if common.timings {
        summary.push_str(&format!(", {} ms", start.elapsed().as_millis()));
    }
    let data = match common.format {
        Format::Json => cert.to_json(),
        Format::Csv => {
            let mut rows = Vec::new();
            node_rows(&cert.root, 0, &mut rows);
            csv_table(
                &["depth", "label", "scheme", "degree", "rule", "claimed", "computed", "relation", "status", "notes"],
                &rows,
            )?
        }
        Format::Text => {
            let mut out = format!(
                "n = {n}, s = {s}, branch {}, q = {}, r = {}, e = {}, e* = {}, h = {}, k = {}\n",
                cert.branch.name(),
                cert.q,
                cert.r,
                cert.e,
                cert.e_star,
                cert.h,
                cert.k
            );
            out.push_str(&cert.root.render_text());
            out.push_str(&format!("root claim {}: {}\n", cert.root.claimed, status_name(cert.status)));
            out
        }
    };
    Ok(Report { data, matches, summary: Some(summary) })
}
