//! Structural ISO/IEC 8211 reader.
//!
//! Only the container layer is decoded here: the 24-byte leader, the
//! directory, and the raw field slices. Field contents are left untouched;
//! interpreting them (e.g. SG2D coordinates) is done by [`super::s57`].

use thiserror::Error;

pub const LEADER_LEN: usize = 24;
pub const FIELD_TERMINATOR: u8 = 0x1e;
pub const UNIT_TERMINATOR: u8 = 0x1f;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Iso8211Error {
    #[error("leader truncated: {available} of 24 bytes available")]
    TruncatedLeader { available: usize },
    #[error("non-digit byte {byte:#04x} at leader position {position}")]
    NonDigit { position: usize, byte: u8 },
    #[error("invalid leader: {0}")]
    InvalidLeader(String),
    #[error("directory is missing its 0x1e terminator")]
    MissingTerminator,
    #[error("directory length {length} is not a multiple of entry width {entry_width}")]
    MisalignedDirectory { length: usize, entry_width: usize },
    #[error("non-digit byte in directory entry {entry}")]
    BadDirectoryEntry { entry: usize },
    #[error("field {tag:?} spans {start}..{end} but the field area holds {available} bytes")]
    FieldOutOfBounds {
        tag: String,
        start: usize,
        end: usize,
        available: usize,
    },
    #[error("record declares {declared} bytes but only {available} remain")]
    TruncatedRecord { declared: usize, available: usize },
}

/// An [`Iso8211Error`] located at the byte offset of the record that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("record at byte offset {offset}: {source}")]
pub struct FileError {
    pub offset: usize,
    #[source]
    pub source: Iso8211Error,
}

/// Widths of the three numeric parts of each directory entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryMap {
    pub size_of_length: usize,
    pub size_of_position: usize,
    pub reserved: u8,
    pub size_of_tag: usize,
}

impl EntryMap {
    pub fn entry_width(&self) -> usize {
        self.size_of_tag + self.size_of_length + self.size_of_position
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordLeader {
    pub record_length: usize,
    pub interchange_level: char,
    /// `L` for the data descriptive record, `D` or `R` for data records.
    pub leader_identifier: char,
    /// Blank in data records, so it is only present when the bytes are digits.
    pub field_control_length: Option<u32>,
    pub base_address: usize,
    pub entry_map: EntryMap,
    /// The leader exactly as read, kept so records re-serialize losslessly.
    pub raw: [u8; LEADER_LEN],
}

impl RecordLeader {
    pub fn is_descriptive(&self) -> bool {
        self.leader_identifier == 'L'
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectoryEntry {
    pub tag: String,
    pub field_length: usize,
    /// Offset relative to the leader's base address.
    pub field_position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalRecord {
    pub leader: RecordLeader,
    pub directory: Vec<DirectoryEntry>,
    pub fields: Vec<(String, Vec<u8>)>,
}

impl LogicalRecord {
    pub fn fields_tagged<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a [u8]> + 'a {
        self.fields
            .iter()
            .filter(move |(t, _)| t == tag)
            .map(|(_, bytes)| bytes.as_slice())
    }

    /// Rebuild the record bytes: raw leader, re-encoded directory, and each
    /// field slice written back at its directory offset. Bytes of the field
    /// area not covered by any entry are zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.leader.record_length];
        out[..LEADER_LEN].copy_from_slice(&self.leader.raw);

        let map = self.leader.entry_map;
        let mut dir = Vec::with_capacity(self.directory.len() * map.entry_width() + 1);
        for entry in &self.directory {
            dir.extend_from_slice(entry.tag.as_bytes());
            dir.extend(format!("{:0w$}", entry.field_length, w = map.size_of_length).bytes());
            dir.extend(format!("{:0w$}", entry.field_position, w = map.size_of_position).bytes());
        }
        if !self.directory.is_empty() || self.leader.base_address > LEADER_LEN {
            dir.push(FIELD_TERMINATOR);
        }
        out[LEADER_LEN..LEADER_LEN + dir.len()].copy_from_slice(&dir);

        let base = self.leader.base_address;
        for (entry, (_, bytes)) in self.directory.iter().zip(&self.fields) {
            let start = base + entry.field_position;
            out[start..start + bytes.len()].copy_from_slice(bytes);
        }
        out
    }
}

/// Encode a record from tagged field payloads, choosing the narrowest
/// directory widths that fit. Payloads are written as given, so callers
/// append their own field terminators.
pub fn encode_record(leader_identifier: char, fields: &[(&str, &[u8])]) -> Vec<u8> {
    let area: usize = fields.iter().map(|(_, b)| b.len()).sum();
    let width = |n: usize| n.max(1).to_string().len();
    let size_of_length = fields.iter().map(|(_, b)| width(b.len())).max().unwrap_or(1);
    let size_of_position = width(area);
    let size_of_tag = fields.iter().map(|(t, _)| t.len()).max().unwrap_or(4);
    let dir_len = if fields.is_empty() {
        0
    } else {
        fields.len() * (size_of_tag + size_of_length + size_of_position) + 1
    };
    let base_address = LEADER_LEN + dir_len;
    let record_length = base_address + area;

    let mut out = format!(
        "{record_length:05}3{leader_identifier}E1 {fcl}{base_address:05} ! {size_of_length}{size_of_position}0{size_of_tag}",
        fcl = if leader_identifier == 'L' { "06" } else { "  " },
    )
    .into_bytes();
    let mut position = 0;
    for (tag, bytes) in fields {
        out.extend(
            format!(
                "{tag:<size_of_tag$}{:0size_of_length$}{position:0size_of_position$}",
                bytes.len()
            )
            .bytes(),
        );
        position += bytes.len();
    }
    if !fields.is_empty() {
        out.push(FIELD_TERMINATOR);
    }
    for (_, bytes) in fields {
        out.extend_from_slice(bytes);
    }
    out
}

fn digits(bytes: &[u8], start: usize, len: usize) -> Result<usize, Iso8211Error> {
    let mut value = 0usize;
    for (i, &b) in bytes[start..start + len].iter().enumerate() {
        if !b.is_ascii_digit() {
            return Err(Iso8211Error::NonDigit {
                position: start + i,
                byte: b,
            });
        }
        value = value * 10 + usize::from(b - b'0');
    }
    Ok(value)
}

pub fn parse_leader(bytes: &[u8]) -> Result<RecordLeader, Iso8211Error> {
    if bytes.len() < LEADER_LEN {
        return Err(Iso8211Error::TruncatedLeader { available: bytes.len() });
    }
    let record_length = digits(bytes, 0, 5)?;
    let base_address = digits(bytes, 12, 5)?;
    let size_of_length = digits(bytes, 20, 1)?;
    let size_of_position = digits(bytes, 21, 1)?;
    let reserved = digits(bytes, 22, 1)? as u8;
    let size_of_tag = digits(bytes, 23, 1)?;

    if record_length < LEADER_LEN {
        return Err(Iso8211Error::InvalidLeader(format!(
            "record length {record_length} is below 24"
        )));
    }
    if base_address < LEADER_LEN || base_address > record_length {
        return Err(Iso8211Error::InvalidLeader(format!(
            "base address {base_address} outside 24..={record_length}"
        )));
    }
    if [size_of_length, size_of_position, size_of_tag].contains(&0) {
        return Err(Iso8211Error::InvalidLeader("entry map widths must be 1..9".into()));
    }

    let field_control_length = digits(bytes, 10, 2).ok().map(|v| v as u32);
    let mut raw = [0u8; LEADER_LEN];
    raw.copy_from_slice(&bytes[..LEADER_LEN]);

    Ok(RecordLeader {
        record_length,
        interchange_level: char::from(bytes[5]),
        leader_identifier: char::from(bytes[6]),
        field_control_length,
        base_address,
        entry_map: EntryMap {
            size_of_length,
            size_of_position,
            reserved,
            size_of_tag,
        },
        raw,
    })
}

/// Decode a directory. `bytes` must include the trailing field terminator.
pub fn parse_directory(bytes: &[u8], map: EntryMap) -> Result<Vec<DirectoryEntry>, Iso8211Error> {
    let Some((&FIELD_TERMINATOR, body)) = bytes.split_last() else {
        return Err(Iso8211Error::MissingTerminator);
    };
    let width = map.entry_width();
    if body.len() % width != 0 {
        return Err(Iso8211Error::MisalignedDirectory {
            length: body.len(),
            entry_width: width,
        });
    }

    body.chunks_exact(width)
        .enumerate()
        .map(|(n, chunk)| {
            let bad = |_| Iso8211Error::BadDirectoryEntry { entry: n };
            let tag = &chunk[..map.size_of_tag];
            let field_length = digits(chunk, map.size_of_tag, map.size_of_length).map_err(bad)?;
            let field_position =
                digits(chunk, map.size_of_tag + map.size_of_length, map.size_of_position).map_err(bad)?;
            Ok(DirectoryEntry {
                tag: String::from_utf8_lossy(tag).into_owned(),
                field_length,
                field_position,
            })
        })
        .collect()
}

/// Parse the record at the start of `bytes`. Trailing bytes beyond the
/// declared record length are ignored.
pub fn parse_record(bytes: &[u8]) -> Result<LogicalRecord, Iso8211Error> {
    let leader = parse_leader(bytes)?;
    if bytes.len() < leader.record_length {
        return Err(Iso8211Error::TruncatedRecord {
            declared: leader.record_length,
            available: bytes.len(),
        });
    }
    let record = &bytes[..leader.record_length];

    let dir_bytes = &record[LEADER_LEN..leader.base_address];
    let directory = if dir_bytes.is_empty() {
        Vec::new()
    } else {
        parse_directory(dir_bytes, leader.entry_map)?
    };

    let area = &record[leader.base_address..];
    let fields = directory
        .iter()
        .map(|entry| {
            let start = entry.field_position;
            let end = start + entry.field_length;
            if end > area.len() {
                return Err(Iso8211Error::FieldOutOfBounds {
                    tag: entry.tag.clone(),
                    start,
                    end,
                    available: area.len(),
                });
            }
            Ok((entry.tag.clone(), area[start..end].to_vec()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(LogicalRecord {
        leader,
        directory,
        fields,
    })
}

/// Parse records back-to-back until the input is exhausted.
pub fn parse_file(bytes: &[u8]) -> Result<Vec<LogicalRecord>, FileError> {
    let mut records = Vec::new();
    let mut offset = 0;
    while offset < bytes.len() {
        let record = parse_record(&bytes[offset..]).map_err(|source| FileError { offset, source })?;
        offset += record.leader.record_length;
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leader_bytes(record_length: &str, base: &str, map: &str) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(record_length.as_bytes());
        b.extend_from_slice(b"3LE1 06");
        b.extend_from_slice(base.as_bytes());
        b.extend_from_slice(b" ! ");
        b.extend_from_slice(map.as_bytes());
        assert_eq!(b.len(), 24);
        b
    }

    #[test]
    fn leader_fields_at_fixed_offsets() {
        let leader = parse_leader(&leader_bytes("00241", "00058", "3404")).unwrap();
        assert_eq!(leader.record_length, 241);
        assert_eq!(leader.base_address, 58);
        assert_eq!(
            leader.entry_map,
            EntryMap {
                size_of_length: 3,
                size_of_position: 4,
                reserved: 0,
                size_of_tag: 4
            }
        );
        assert_eq!(leader.leader_identifier, 'L');
        assert_eq!(leader.field_control_length, Some(6));
    }

    #[test]
    fn minimal_record_has_empty_directory() {
        let bytes = leader_bytes("00024", "00024", "3404");
        let rec = parse_record(&bytes).unwrap();
        assert!(rec.directory.is_empty());
        assert!(rec.fields.is_empty());
        assert_eq!(rec.to_bytes(), bytes);
    }

    #[test]
    fn non_digit_in_record_length() {
        let err = parse_leader(&leader_bytes("00X41", "00058", "3404")).unwrap_err();
        assert_eq!(
            err,
            Iso8211Error::NonDigit {
                position: 2,
                byte: b'X'
            }
        );
    }

    #[test]
    fn short_leader() {
        assert_eq!(
            parse_leader(b"0024"),
            Err(Iso8211Error::TruncatedLeader { available: 4 })
        );
    }

    #[test]
    fn zero_width_entry_map_rejected() {
        let err = parse_leader(&leader_bytes("00024", "00024", "0404")).unwrap_err();
        assert!(matches!(err, Iso8211Error::InvalidLeader(_)));
    }

    #[test]
    fn single_directory_entry() {
        let map = EntryMap {
            size_of_length: 4,
            size_of_position: 4,
            reserved: 0,
            size_of_tag: 4,
        };
        let entries = parse_directory(b"SG2D00340000\x1e", map).unwrap();
        assert_eq!(
            entries,
            vec![DirectoryEntry {
                tag: "SG2D".into(),
                field_length: 34,
                field_position: 0
            }]
        );
    }

    #[test]
    fn directory_edge_cases() {
        let map = EntryMap {
            size_of_length: 3,
            size_of_position: 4,
            reserved: 0,
            size_of_tag: 4,
        };
        assert_eq!(parse_directory(&[FIELD_TERMINATOR], map), Ok(vec![]));
        assert_eq!(
            parse_directory(b"SG2D\x1e", map),
            Err(Iso8211Error::MisalignedDirectory {
                length: 4,
                entry_width: 11
            })
        );
        assert_eq!(
            parse_directory(b"SG2D0340000", map),
            Err(Iso8211Error::MissingTerminator)
        );
        assert_eq!(parse_directory(b"", map), Err(Iso8211Error::MissingTerminator));
    }

    #[test]
    fn field_past_record_end() {
        // one entry, field claims 10 bytes but the area holds 2
        let mut bytes = leader_bytes("00038", "00036", "3404");
        bytes.extend_from_slice(b"SG2D0100000\x1e");
        bytes.extend_from_slice(b"ab");
        let err = parse_record(&bytes).unwrap_err();
        assert!(matches!(
            err,
            Iso8211Error::FieldOutOfBounds {
                end: 10,
                available: 2,
                ..
            }
        ));
    }

    #[test]
    fn encoded_records_parse_back() {
        let a = encode_record('D', &[("0001", b"\x01\x00\x1e"), ("SG2D", &[7u8; 17])]);
        let b = encode_record('R', &[]);
        let mut file = a.clone();
        file.extend_from_slice(&b);
        let recs = parse_file(&file).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].fields[1], ("SG2D".to_string(), vec![7u8; 17]));
        assert_eq!(recs[0].to_bytes(), a);
        assert_eq!(recs[1].to_bytes(), b);
        assert_eq!(recs[1].leader.record_length, 24);
    }

    #[test]
    fn truncated_second_record_reports_its_offset() {
        let mut file = encode_record('D', &[("SG2D", &[0u8; 9])]);
        let first = file.len();
        file.extend_from_slice(b"0012");
        let err = parse_file(&file).unwrap_err();
        assert_eq!(err.offset, first);
        assert_eq!(err.source, Iso8211Error::TruncatedLeader { available: 4 });
    }

    #[test]
    fn empty_file_has_no_records() {
        assert_eq!(parse_file(&[]), Ok(vec![]));
    }
}
