use std::fmt::{self, Write as _};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Arrive,
    Hop,
    Park,
    Eject,
    LevelUp,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Arrive => "arrive",
            EventKind::Hop => "hop",
            EventKind::Park => "park",
            EventKind::Eject => "eject",
            EventKind::LevelUp => "levelUp",
        })
    }
}

/// One step of a simulation. Unused garage fields are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub ordinal: usize,
    pub kind: EventKind,
    pub car: usize,
    pub from_garage: Option<usize>,
    pub to_garage: Option<usize>,
    pub hop_length: f64,
    pub level: u32,
}

pub const TRACE_HEADER: &str = "ordinal,kind,car,from_garage,to_garage,hop_length,level";

pub fn trace_csv(events: &[TraceEvent]) -> String {
    let mut out = String::with_capacity(32 * (events.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    let opt = |g: Option<usize>| g.map(|g| g.to_string()).unwrap_or_default();
    for e in events {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.ordinal,
            e.kind,
            e.car,
            opt(e.from_garage),
            opt(e.to_garage),
            e.hop_length,
            e.level
        )
        .expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let events = vec![
            TraceEvent {
                ordinal: 0,
                kind: EventKind::Arrive,
                car: 0,
                from_garage: None,
                to_garage: Some(2),
                hop_length: 0.0,
                level: 0,
            },
            TraceEvent {
                ordinal: 1,
                kind: EventKind::LevelUp,
                car: 0,
                from_garage: None,
                to_garage: Some(2),
                hop_length: 0.5,
                level: 1,
            },
        ];
        assert_eq!(
            trace_csv(&events),
            "ordinal,kind,car,from_garage,to_garage,hop_length,level\n0,arrive,0,,2,0,0\n1,levelUp,0,,2,0.5,1\n"
        );
    }
}
