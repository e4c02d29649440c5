//! Text, CSV and JSON rendering. Everything is buffered and written at the end.

use std::io::{self, Write};

use cartan_core::characters::CharacterTable;
use cartan_core::classify::Verdict;
use cartan_core::invariants::CurveInvariants;
use cartan_core::tables::{LowLevelRow, Table1Row, Table2Row};
use cartan_core::SubgroupSpec;
use clap::ValueEnum;
use serde_json::{json, Value};

/// Version tag carried by every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub struct Output {
    format: Format,
    buf: String,
}

fn csv_lines(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn document(kind: &str, body: Value) -> Value {
    json!({ "schema": format!("cartan.{kind}/{SCHEMA_VERSION}"), "data": body })
}

impl Output {
    pub fn new(format: Format) -> Self {
        Output { format, buf: String::new() }
    }

    pub fn flush(&mut self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(self.buf.as_bytes())?;
        self.buf.clear();
        w.flush()
    }

    pub fn raw(&mut self, s: &str) {
        self.buf.push_str(s);
    }

    fn json(&mut self, kind: &str, body: Value) {
        self.buf.push_str(&serde_json::to_string_pretty(&document(kind, body)).expect("json"));
        self.buf.push('\n');
    }

    fn tabular(&mut self, kind: &str, header: &[&str], rows: Vec<Vec<String>>, body: impl FnOnce() -> Value) {
        match self.format {
            Format::Text => self.buf.push_str(&aligned(header, &rows)),
            Format::Csv => self.buf.push_str(&csv_lines(header, &rows)),
            Format::Json => self.json(kind, body()),
        }
    }

    pub fn invariants(&mut self, spec: &SubgroupSpec, inv: &CurveInvariants) {
        match self.format {
            Format::Text => self.buf.push_str(&format!(
                "{}: d={} ε₂={} ε₃={} ε∞={} g={} A={}\n",
                spec.curve_name(),
                inv.d,
                inv.eps2,
                inv.eps3,
                inv.eps_inf,
                inv.genus,
                inv.gonality_lb
            )),
            Format::Csv => {
                let row = [inv.d, inv.eps2, inv.eps3, inv.eps_inf, inv.genus, inv.gonality_lb].map(|x| x.to_string());
                let mut cells = vec![spec.to_string()];
                cells.extend(row);
                self.buf
                    .push_str(&csv_lines(&["spec", "d", "eps2", "eps3", "eps_inf", "genus", "gonality_lb"], &[cells]));
            }
            Format::Json => self.json(
                "invariants",
                json!({ "spec": spec.to_string(), "curve": spec.curve_name(), "invariants": inv }),
            ),
        }
    }

    pub fn verdict(&mut self, v: &Verdict) {
        let tilde = v.tilde_cm.as_ref().map_or("-".to_string(), |t| t.to_string());
        let aut = v.aut_group.as_ref().map_or("-".to_string(), |a| a.to_string());
        let aut_order = v.aut_group.as_ref().map_or("-".to_string(), |a| a.order.to_string());
        let witness = v.witness.map_or("-".to_string(), |l| l.to_string());
        match self.format {
            Format::Text => {
                let mut s = format!("{} ({})\n", v.curve, v.spec);
                s.push_str(&format!("  status      {}\n", v.status));
                s.push_str(&format!("  genus       {}\n", v.genus));
                s.push_str(&format!("  tilde_cm    {tilde}\n"));
                s.push_str(&format!("  gonality >= {}\n", v.gonality_lb));
                s.push_str(&format!("  witness l   {witness}\n"));
                s.push_str(&format!("  aut group   {aut} (order {aut_order})\n"));
                if let Some(inv) = v.aut_group.as_ref().and_then(|a| a.extra_involution.as_ref()) {
                    s.push_str(&format!("  involution  {} = {} {}\n", inv.product, inv.gamma1, inv.gamma0));
                }
                s.push_str(&format!("  field       {}\n", v.field));
                for n in &v.notes {
                    s.push_str(&format!("  note: {n}\n"));
                }
                self.buf.push_str(&s);
            }
            Format::Csv => {
                let row = vec![
                    v.spec.clone(),
                    v.genus.to_string(),
                    tilde,
                    v.gonality_lb.to_string(),
                    witness,
                    v.status.to_string(),
                    aut,
                    aut_order,
                    v.field.clone(),
                ];
                self.buf.push_str(&csv_lines(
                    &["spec", "genus", "tilde_cm", "gonality_lb", "witness", "status", "aut_group", "aut_order", "field"],
                    &[row],
                ));
            }
            Format::Json => {
                let mut body = serde_json::to_value(v).expect("json");
                body["aut_group_name"] = json!(aut);
                self.json("verdict", body);
            }
        }
    }

    pub fn table1(&mut self, rows: &[Table1Row]) {
        let cells = rows
            .iter()
            .map(|r| {
                vec![
                    r.q.to_string(),
                    r.family.clone(),
                    r.d.to_string(),
                    r.eps2.to_string(),
                    r.eps3.to_string(),
                    r.eps_inf.to_string(),
                ]
            })
            .collect();
        self.tabular("table1", &["q", "family", "d", "eps2", "eps3", "eps_inf"], cells, || json!(rows));
    }

    pub fn table2(&mut self, rows: &[Table2Row]) {
        let cells = rows
            .iter()
            .map(|r| vec![r.subgroup.clone(), r.spec.clone(), r.group.order.to_string(), r.group.label.to_string()])
            .collect();
        self.tabular("table2", &["subgroup", "spec", "order", "group"], cells, || json!(rows));
    }

    pub fn chartable(&mut self, t: &CharacterTable) {
        let names: Vec<String> = t.columns.iter().map(|c| c.to_string()).collect();
        let mut header = vec!["class", "size"];
        header.extend(names.iter().map(String::as_str));
        let cells = t
            .rows
            .iter()
            .map(|(rep, vals)| {
                let mut r = vec![rep.shape.to_string(), rep.size.to_string()];
                r.extend(vals.iter().map(u64::to_string));
                r
            })
            .collect();
        self.tabular("chartable", &header, cells, || {
            json!({
                "e": t.e,
                "columns": names,
                "rows": t.rows.iter().map(|(rep, vals)| json!({
                    "class": rep.shape.to_string(),
                    "representative": rep.rep,
                    "size": rep.size,
                    "values": vals,
                })).collect::<Vec<_>>(),
            })
        });
    }

    pub fn low_levels(&mut self, rows: &[LowLevelRow]) {
        let mut header = vec!["n".to_string()];
        if let Some(first) = rows.first() {
            for c in &first.cells {
                for k in ["g", "cm", "A", "class"] {
                    header.push(format!("{}_{k}", c.family));
                }
            }
        }
        let cells = rows
            .iter()
            .map(|r| {
                let mut v = vec![r.n.to_string()];
                for c in &r.cells {
                    v.push(c.genus.to_string());
                    v.push(c.tilde_cm.map_or("?".to_string(), |x| x.to_string()));
                    v.push(c.gonality_lb.to_string());
                    v.push(
                        match c.class {
                            cartan_core::tables::CellClass::Italic => "italic",
                            cartan_core::tables::CellClass::Bold => "bold",
                            cartan_core::tables::CellClass::Plain => "plain",
                        }
                        .to_string(),
                    );
                }
                v
            })
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        self.tabular("lowlevels", &header, cells, || json!(rows));
    }

    pub fn checks(&mut self, checks: &[(String, bool, String)]) {
        match self.format {
            Format::Text => {
                for (name, ok, detail) in checks {
                    self.buf
                        .push_str(&format!("{} {name} ({detail})\n", if *ok { "PASS" } else { "FAIL" }));
                }
                let failed = checks.iter().filter(|c| !c.1).count();
                self.buf.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
            }
            Format::Csv => {
                let rows: Vec<Vec<String>> =
                    checks.iter().map(|(n, ok, d)| vec![n.clone(), ok.to_string(), d.clone()]).collect();
                self.buf.push_str(&csv_lines(&["check", "holds", "detail"], &rows));
            }
            Format::Json => self.json(
                "checks",
                json!(checks
                    .iter()
                    .map(|(n, ok, d)| json!({ "check": n, "holds": ok, "detail": d }))
                    .collect::<Vec<_>>()),
            ),
        }
    }
}
