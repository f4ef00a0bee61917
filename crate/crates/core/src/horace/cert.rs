use serde::{Deserialize, Serialize};

/// The step a certificate node records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    DirectRank,
    Castelnuovo,
    Lemzero,
    ResidueLemma,
    TraceLemma,
    SubstitutionLemma,
    FixedComponent,
    AppendixArithmetic,
}

/// How `computed` must compare with `claimed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, computed: i64, claimed: i64) -> bool {
        match self {
            Relation::Eq => computed == claimed,
            Relation::Le => computed <= claimed,
            Relation::Ge => computed >= claimed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    BoundOnly,
    Failed,
}

/// One step of a certification tree. Field order is the serialization
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateNode {
    pub label: String,
    pub scheme: String,
    pub degree: u32,
    pub rule: Rule,
    pub claimed: i64,
    /// `None` when the value was not computed (above the direct cap).
    pub computed: Option<i64>,
    pub relation: Relation,
    pub status: Status,
    pub notes: Vec<String>,
    pub children: Vec<CertificateNode>,
}

impl CertificateNode {
    pub fn new(label: impl Into<String>, scheme: impl Into<String>, degree: u32, rule: Rule, claimed: i64) -> Self {
        Self {
            label: label.into(),
            scheme: scheme.into(),
            degree,
            rule,
            claimed,
            computed: None,
            relation: Relation::Eq,
            status: Status::BoundOnly,
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn computed(mut self, value: Option<i64>, relation: Relation) -> Self {
        self.computed = value;
        self.relation = relation;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn child(mut self, child: CertificateNode) -> Self {
        self.children.push(child);
        self
    }

    /// A pure arithmetic fact: verified or failed, never bound-only.
    pub fn arithmetic(label: impl Into<String>, holds: bool) -> Self {
        Self::new(label, "arithmetic", 0, Rule::AppendixArithmetic, 1).computed(Some(i64::from(holds)), Relation::Eq)
    }

    /// Sets `status` bottom-up. A node is failed if its own relation fails
    /// or a child failed; verified if its relation was computed and holds
    /// and every child is verified; bound-only otherwise.
    pub fn settle(&mut self) -> Status {
        let mut worst = Status::Verified;
        for c in &mut self.children {
            worst = worst.max(c.settle());
        }
        let own = match self.computed {
            Some(v) if self.relation.holds(v, self.claimed) => Status::Verified,
            Some(_) => Status::Failed,
            None => Status::BoundOnly,
        };
        self.status = worst.max(own);
        self.status
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(CertificateNode::size).sum::<usize>()
    }

    /// Depth-first iterator over the tree.
    pub fn walk(&self) -> Vec<&CertificateNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }

    /// Indented one-line-per-node rendering.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s, 0);
        s
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let computed = self.computed.map_or_else(|| "-".to_string(), |v| v.to_string());
        let rel = match self.relation {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        let status = match self.status {
            Status::Verified => "verified",
            Status::BoundOnly => "bound-only",
            Status::Failed => "FAILED",
        };
        out.push_str(&format!(
            "{:indent$}[{status}] {}: computed {computed} {rel} claimed {}\n",
            "",
            self.label,
            self.claimed,
            indent = depth * 2
        ));
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_propagation() {
        let mut root = CertificateNode::new("root", "X", 5, Rule::Lemzero, 2)
            .computed(Some(2), Relation::Eq)
            .child(CertificateNode::arithmetic("a", true))
            .child(CertificateNode::new("lemma", "Y", 4, Rule::ResidueLemma, 3));
        assert_eq!(root.settle(), Status::BoundOnly);
        root.children[1].computed = Some(3);
        assert_eq!(root.settle(), Status::Verified);
        root.children[0].computed = Some(0);
        assert_eq!(root.settle(), Status::Failed);
    }

    #[test]
    fn relations() {
        assert!(Relation::Le.holds(1, 2));
        assert!(!Relation::Ge.holds(1, 2));
        assert!(Relation::Eq.holds(2, 2));
    }

    #[test]
    fn serialization_field_order() {
        let mut n = CertificateNode::new("x", "s", 3, Rule::TraceLemma, 4).computed(Some(4), Relation::Le);
        n.settle();
        let json = serde_json::to_string(&n).unwrap();
        assert_eq!(
            json,
            r#"{"label":"x","scheme":"s","degree":3,"rule":"trace-lemma","claimed":4,"computed":4,"relation":"<=","status":"verified","notes":[],"children":[]}"#
        );
    }
}
