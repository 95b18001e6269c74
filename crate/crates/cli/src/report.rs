//! Plain `key: value` reports, one record per check, separated by `---`.

use std::fmt::Write as _;

use w3orb::genericity::Check;

#[derive(Debug, Default)]
pub struct Report {
    header: Vec<(String, String)>,
    records: Vec<Vec<(String, String)>>,
    checks: Vec<bool>,
}

impl Report {
    pub fn new(command: &str, preset: &str) -> Self {
        let mut r = Report::default();
        r.header.push(("command".into(), command.into()));
        r.header.push(("preset".into(), preset.into()));
        r
    }

    pub fn header(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.into(), value.to_string()));
    }

    /// An informational record; does not affect the outcome.
    pub fn info(&mut self, fields: Vec<(&str, String)>) {
        self.records.push(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    }

    pub fn check(&mut self, c: &Check) {
        self.check_with(c, Vec::new());
    }

    pub fn check_with(&mut self, c: &Check, extra: Vec<(&str, String)>) {
        let mut rec = vec![
            ("claim".to_string(), c.claim.clone()),
            ("expected".to_string(), c.expected.clone()),
            ("got".to_string(), c.got.clone()),
        ];
        rec.extend(extra.into_iter().map(|(k, v)| (k.to_string(), v)));
        rec.push(("status".to_string(), if c.pass { "PASS" } else { "FAIL" }.to_string()));
        self.records.push(rec);
        self.checks.push(c.pass);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|&p| p)
    }

    pub fn render(&self, elapsed_ms: Option<u128>) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "{k}: {v}");
        }
        for rec in &self.records {
            out.push_str("---\n");
            for (k, v) in rec {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        out.push_str("---\n");
        let failed = self.checks.iter().filter(|&&p| !p).count();
        let _ = writeln!(out, "checks: {}", self.checks.len());
        let _ = writeln!(out, "failed: {failed}");
        let _ = writeln!(out, "pass: {}", self.passed());
        if let Some(ms) = elapsed_ms {
            let _ = writeln!(out, "elapsed_ms: {ms}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let mut r = Report::new("demo", "generic");
        r.info(vec![("note", "x".into())]);
        r.check(&Check { claim: "a".into(), expected: "1".into(), got: "1".into(), pass: true });
        let text = r.render(None);
        assert_eq!(
            text,
            "command: demo\npreset: generic\n---\nnote: x\n---\nclaim: a\nexpected: 1\ngot: 1\nstatus: PASS\n---\nchecks: 1\nfailed: 0\npass: true\n"
        );
        assert!(r.render(Some(5)).ends_with("elapsed_ms: 5\n"));
    }
}
