//! Line-delimited JSON traces: one record per robot per step.

use std::io::{self, BufRead, Write};

use gathering_core::simulator::{TraceEvent, TraceSink};
use serde::{Deserialize, Serialize};

/// Serialized form of a [`TraceEvent`]. Field order is fixed by declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: u64,
    pub robot_id: usize,
    pub activated: bool,
    pub branch: Option<String>,
    pub action: Option<String>,
    pub target_x: Option<f64>,
    pub target_y: Option<f64>,
    pub new_x: f64,
    pub new_y: f64,
}

impl From<&TraceEvent> for TraceRecord {
    fn from(e: &TraceEvent) -> Self {
        TraceRecord {
            t: e.t,
            robot_id: e.robot,
            activated: e.activated,
            branch: e.branch.map(|b| b.name().to_owned()),
            action: e.action.map(|a| a.name().to_owned()),
            target_x: e.target.map(|p| p.x),
            target_y: e.target.map(|p| p.y),
            new_x: e.new_pos.x,
            new_y: e.new_pos.y,
        }
    }
}

/// Writes each event as one JSON line. The sink interface cannot fail, so
/// the first IO error is kept and reported by [`JsonlTrace::finish`].
pub struct JsonlTrace<W: Write> {
    out: W,
    error: Option<io::Error>,
    lines: u64,
}

impl<W: Write> JsonlTrace<W> {
    pub fn new(out: W) -> Self {
        JsonlTrace {
            out,
            error: None,
            lines: 0,
        }
    }

    pub fn lines(&self) -> u64 {
        self.lines
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> TraceSink for JsonlTrace<W> {
    fn record(&mut self, event: &TraceEvent) {
        if self.error.is_some() {
            return;
        }
        let res = serde_json::to_writer(&mut self.out, &TraceRecord::from(event))
            .map_err(io::Error::from)
            .and_then(|()| self.out.write_all(b"\n"));
        match res {
            Ok(()) => self.lines += 1,
            Err(e) => self.error = Some(e),
        }
    }
}

pub fn read_trace<R: BufRead>(input: R) -> io::Result<Vec<TraceRecord>> {
    input
        .lines()
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
        .map(|l| Ok(serde_json::from_str(&l?)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gathering_core::geometry::Point;
    use gathering_core::protocol::{ActionKind, Branch};

    #[test]
    fn record_layout_is_stable() {
        let e = TraceEvent {
            t: 3,
            robot: 1,
            activated: true,
            branch: Some(Branch::TwoMax),
            action: Some(ActionKind::MoveCareful),
            target: Some(Point::new(1.0, -0.5)),
            new_pos: Point::new(0.25, 0.0),
        };
        let mut sink = JsonlTrace::new(Vec::new());
        sink.record(&e);
        let idle = TraceEvent {
            activated: false,
            branch: None,
            action: None,
            target: None,
            ..e
        };
        sink.record(&idle);
        assert_eq!(sink.lines(), 2);
        let text = String::from_utf8(sink.finish().unwrap()).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            r#"{"t":3,"robot_id":1,"activated":true,"branch":"two_max","action":"move_careful","target_x":1.0,"target_y":-0.5,"new_x":0.25,"new_y":0.0}"#
        );
        let back = read_trace(text.as_bytes()).unwrap();
        assert_eq!(back, vec![TraceRecord::from(&e), TraceRecord::from(&idle)]);
    }
}
