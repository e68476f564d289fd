#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evlink/codec.hpp"
#include "evlink/demod.hpp"
#include "evlink/framing.hpp"
#include "evlink/metrics.hpp"
#include "evlink/types.hpp"

namespace evlink {

// Event CSV: header `t_us,x,y,p`, one event per row, rows in canonical
// (t, y, x) order. The interchange format between every stage.
void write_event_csv(const std::filesystem::path& path, const EventStream& stream);
EventStream read_event_csv(const std::filesystem::path& path);

// Pulse-string file: `# slot_us=N` header line, then one ASCII '1'/'0' per
// slot, newline-terminated.
void write_pulse_string(const std::filesystem::path& path, const PulseString& p);
PulseString read_pulse_string(const std::filesystem::path& path);

// Plain-text PGM (P2) of per-pixel counts.
void write_frame_pgm(const std::filesystem::path& path, const EventFrame& frame);
EventFrame read_frame_pgm(const std::filesystem::path& path);

// Ground-truth / detection box annotations: `label,x,y,w,h` per row.
struct Annotation {
    std::string label;
    BoundingBox box;
};

void write_annotations(const std::filesystem::path& path, const std::vector<Annotation>& rows);
std::vector<Annotation> read_annotations(const std::filesystem::path& path);

// Packets file: one packet per line as `<nbits> <hex>`, hex MSB-first with
// the last nibble zero-padded.
void write_packets(const std::filesystem::path& path, const std::vector<Bits>& packets);
std::vector<Bits> read_packets(const std::filesystem::path& path);
std::string packet_to_hex(const Bits& bits);

std::string link_report_json(const LinkReport& r);
void write_link_report(const std::filesystem::path& path, const LinkReport& r);
std::string link_report_csv_header();
std::string link_report_csv_row(const LinkReport& r);

std::string decode_log_json(const DecodeLog& log);
void write_decode_log(const std::filesystem::path& path, const DecodeLog& log);

// Writes through a temp file and renames, so partial files never land.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace evlink
