#include "evlink/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evlink/errors.hpp"

namespace evlink {

namespace fs = std::filesystem;

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    fs::rename(tmp, path);
}

void write_event_csv(const fs::path& path, const EventStream& stream) {
    std::ostringstream out;
    out << "t_us,x,y,p\n";
    for (const auto& ev : stream)
        out << ev.t_us << ',' << ev.x << ',' << ev.y << ',' << ev.polarity << '\n';
    write_text_atomic(path, out.str());
}

EventStream read_event_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("empty event csv: " + path.string());
    if (line != "t_us,x,y,p" && line != "t_us,x,y,p\r")
        throw Error("bad event csv header in " + path.string());

    EventStream stream;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Event ev;
        char c1, c2, c3;
        std::istringstream row(line);
        if (!(row >> ev.t_us >> c1 >> ev.x >> c2 >> ev.y >> c3 >> ev.polarity) || c1 != ',' ||
            c2 != ',' || c3 != ',')
            throw Error("bad event row: " + line);
        if (!stream.empty() && ev.t_us < stream.back().t_us)
            throw Error("event csv rows must be time-ordered: " + path.string());
        stream.push_back(ev);
    }
    return stream;
}

void write_pulse_string(const fs::path& path, const PulseString& p) {
    std::ostringstream out;
    out << "# slot_us=" << p.slot_us << '\n';
    for (auto s : p.slots) out << (s ? '1' : '0');
    out << '\n';
    write_text_atomic(path, out.str());
}

PulseString read_pulse_string(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    PulseString p;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# slot_us=", 0) == 0) {
            p.slot_us = std::stoll(line.substr(10));
            continue;
        }
        for (char c : line) {
            if (c == '1')
                p.slots.push_back(1);
            else if (c == '0')
                p.slots.push_back(0);
            else
                throw Error("bad pulse string character in " + path.string());
        }
    }
    return p;
}

void write_frame_pgm(const fs::path& path, const EventFrame& frame) {
    std::uint32_t maxval = 1;
    for (auto c : frame.counts) maxval = std::max(maxval, c);
    std::ostringstream out;
    out << "P2\n" << frame.width << ' ' << frame.height << '\n' << maxval << '\n';
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            if (x) out << ' ';
            out << frame.at(x, y);
        }
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

EventFrame read_frame_pgm(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P2") throw Error("expected plain-text P2 PGM: " + path.string());
    EventFrame frame;
    std::uint32_t maxval = 0;
    if (!(in >> frame.width >> frame.height >> maxval))
        throw Error("bad PGM header: " + path.string());
    frame.counts.resize(static_cast<std::size_t>(frame.width) *
                        static_cast<std::size_t>(frame.height));
    for (auto& c : frame.counts)
        if (!(in >> c)) throw Error("truncated PGM: " + path.string());
    return frame;
}

void write_annotations(const fs::path& path, const std::vector<Annotation>& rows) {
    std::ostringstream out;
    out << "label,x,y,w,h\n";
    for (const auto& r : rows)
        out << r.label << ',' << r.box.x << ',' << r.box.y << ',' << r.box.w << ',' << r.box.h
            << '\n';
    write_text_atomic(path, out.str());
}

std::vector<Annotation> read_annotations(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("empty annotation file: " + path.string());
    std::vector<Annotation> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Annotation a;
        const auto first = line.find(',');
        if (first == std::string::npos) throw Error("bad annotation row: " + line);
        a.label = line.substr(0, first);
        char c1, c2, c3;
        std::istringstream rest(line.substr(first + 1));
        if (!(rest >> a.box.x >> c1 >> a.box.y >> c2 >> a.box.w >> c3 >> a.box.h))
            throw Error("bad annotation row: " + line);
        rows.push_back(std::move(a));
    }
    return rows;
}

std::string packet_to_hex(const Bits& bits) {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            v <<= 1;
            if (i + k < bits.size()) v |= bits[i + k];
        }
        hex.push_back(digits[v]);
    }
    return hex;
}

namespace {

Bits packet_from_hex(std::size_t nbits, const std::string& hex) {
    Bits bits;
    bits.reserve(nbits);
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw Error("bad hex digit in packet file");
        for (int k = 3; k >= 0; --k)
            if (bits.size() < nbits) bits.push_back(static_cast<std::uint8_t>((v >> k) & 1));
    }
    if (bits.size() != nbits) throw Error("packet shorter than declared bit count");
    return bits;
}

}  // namespace

void write_packets(const fs::path& path, const std::vector<Bits>& packets) {
    std::ostringstream out;
    for (const auto& p : packets) out << p.size() << ' ' << packet_to_hex(p) << '\n';
    write_text_atomic(path, out.str());
}

std::vector<Bits> read_packets(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<Bits> packets;
    std::size_t nbits;
    std::string hex;
    while (in >> nbits >> hex) packets.push_back(packet_from_hex(nbits, hex));
    return packets;
}

std::string link_report_json(const LinkReport& r) {
    nlohmann::ordered_json j;
    j["packet_error_rate"] = r.packet_error_rate;
    j["total_packets"] = r.total_packets;
    j["avg_hamming"] = r.avg_hamming;
    j["max_hamming"] = r.max_hamming;
    j["bit_error_rate"] = r.bit_error_rate;
    j["achieved_rate_bps"] = r.achieved_rate_bps;
    j["lost_count"] = r.lost_count;
    j["length_mismatches"] = r.length_mismatches;
    j["no_signal"] = r.no_signal;
    return j.dump(2) + "\n";
}

void write_link_report(const fs::path& path, const LinkReport& r) {
    write_text_atomic(path, link_report_json(r));
}

std::string link_report_csv_header() {
    return "packet_error_rate,total_packets,avg_hamming,max_hamming,bit_error_rate,"
           "achieved_rate_bps,lost_count,length_mismatches,no_signal";
}

std::string link_report_csv_row(const LinkReport& r) {
    std::ostringstream out;
    out << r.packet_error_rate << ',' << r.total_packets << ',' << r.avg_hamming << ','
        << r.max_hamming << ',' << r.bit_error_rate << ',' << r.achieved_rate_bps << ','
        << r.lost_count << ',' << r.length_mismatches << ',' << (r.no_signal ? 1 : 0);
    return out.str();
}

std::string decode_log_json(const DecodeLog& log) {
    nlohmann::ordered_json j;
    auto runs_to_json = [](const std::vector<DecodeLog::Run>& runs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : runs) arr.push_back({{"index", r.index}, {"count", r.count}});
        return arr;
    };
    j["runs"] = runs_to_json(log.runs);
    j["sync_positions"] = runs_to_json(log.syncs);
    j["anomalies"] = runs_to_json(log.anomalies);
    j["skipped_before_sync"] = log.skipped_before_sync;
    return j.dump(2) + "\n";
}

void write_decode_log(const fs::path& path, const DecodeLog& log) {
    write_text_atomic(path, decode_log_json(log));
}

}  // namespace evlink
