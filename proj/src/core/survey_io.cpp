#include "bathyslam/core/survey_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <memory>
#include <string_view>
#include <system_error>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

namespace {

constexpr std::string_view kHeaderDr = "ping_id,t,beam_x,beam_y,beam_z,dr_x,dr_y,dr_z,dr_yaw";
constexpr std::string_view kHeaderGt =
    "ping_id,t,beam_x,beam_y,beam_z,dr_x,dr_y,dr_z,dr_yaw,gt_x,gt_y,gt_z,gt_yaw";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

double parse_double(std::string_view field, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw DataError(path + ":" + std::to_string(line_no) + ": malformed number '" +
                        std::string(field) + "'");
    }
    return value;
}

std::uint64_t parse_uint(std::string_view field, const std::string& path, std::size_t line_no) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": malformed ping id '" +
                        std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct SurveyLogWriter::Impl {
    std::ofstream out;
    bool with_gt = false;
    std::string path;
};

SurveyLogWriter::SurveyLogWriter(const std::string& path, bool with_ground_truth)
    : impl_(std::make_unique<Impl>()) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) throw DataError("cannot open survey log for writing: " + path);
    impl_->with_gt = with_ground_truth;
    impl_->path = path;
    impl_->out << (with_ground_truth ? kHeaderGt : kHeaderDr) << '\n';
}

SurveyLogWriter::~SurveyLogWriter() = default;

void SurveyLogWriter::write_step(std::uint32_t ping_id, const SurveyStep& step) {
    auto& out = impl_->out;
    for (const Beam& beam : step.ping.beams) {
        out << ping_id << ',' << format_double(step.ping.t) << ','
            << format_double(beam.position.x()) << ',' << format_double(beam.position.y()) << ','
            << format_double(beam.position.z()) << ',' << format_double(step.dr.position.x())
            << ',' << format_double(step.dr.position.y()) << ','
            << format_double(step.dr.position.z()) << ',' << format_double(step.dr.heading);
        if (impl_->with_gt) {
            if (!step.gt) throw DataError("write_step: ground-truth layout but step has no gt");
            out << ',' << format_double(step.gt->position.x()) << ','
                << format_double(step.gt->position.y()) << ','
                << format_double(step.gt->position.z()) << ',' << format_double(step.gt->heading);
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + impl_->path);
}

void SurveyLogWriter::close() {
    impl_->out.close();
    if (impl_->out.fail()) throw DataError("close failed: " + impl_->path);
}

std::vector<SurveyStep> ingest_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open survey log: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": missing header row");
    const std::string_view header = trim(line);
    bool with_gt;
    if (header == kHeaderGt) {
        with_gt = true;
    } else if (header == kHeaderDr) {
        with_gt = false;
    } else {
        throw DataError(path + ":1: unrecognized header '" + std::string(header) + "'");
    }
    const std::size_t expected_cols = with_gt ? 13 : 9;

    std::vector<SurveyStep> steps;
    std::size_t line_no = 1;
    bool have_current = false;
    std::uint64_t current_id = 0;
    double last_t = 0.0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != expected_cols) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_cols) + " columns, got " +
                            std::to_string(fields.size()));
        }
        const std::uint64_t ping_id = parse_uint(fields[0], path, line_no);
        const double t = parse_double(fields[1], path, line_no);
        Beam beam;
        beam.position =
            Vec3(parse_double(fields[2], path, line_no), parse_double(fields[3], path, line_no),
                 parse_double(fields[4], path, line_no));
        Pose dr;
        dr.t = t;
        dr.position =
            Vec3(parse_double(fields[5], path, line_no), parse_double(fields[6], path, line_no),
                 parse_double(fields[7], path, line_no));
        dr.heading = parse_double(fields[8], path, line_no);

        std::optional<Pose> gt;
        if (with_gt) {
            Pose g;
            g.t = t;
            g.position = Vec3(parse_double(fields[9], path, line_no),
                              parse_double(fields[10], path, line_no),
                              parse_double(fields[11], path, line_no));
            g.heading = parse_double(fields[12], path, line_no);
            gt = g;
        }

        if (have_current && ping_id == current_id) {
            if (t != steps.back().ping.t) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": ping " + std::to_string(ping_id) + " has mixed timestamps");
            }
            steps.back().ping.beams.push_back(beam);
        } else {
            if (have_current && t < last_t) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": non-monotone timestamp " + std::string(fields[1]));
            }
            SurveyStep step;
            step.ping.t = t;
            step.ping.beams.push_back(beam);
            step.dr = dr;
            step.gt = gt;
            steps.push_back(std::move(step));
            current_id = ping_id;
            have_current = true;
            last_t = t;
        }
    }
    return steps;
}

void write_survey_log(const std::string& path, const std::vector<SurveyStep>& steps,
                      bool with_ground_truth) {
    SurveyLogWriter writer(path, with_ground_truth);
    std::uint32_t id = 0;
    for (const auto& step : steps) writer.write_step(id++, step);
    writer.close();
}

void write_trajectory(const std::string& path, const std::vector<Pose>& poses) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open trajectory file for writing: " + path);
    out << "t,x,y,z,yaw\n";
    for (const Pose& p : poses) {
        out << format_double(p.t) << ',' << format_double(p.position.x()) << ','
            << format_double(p.position.y()) << ',' << format_double(p.position.z()) << ','
            << format_double(p.heading) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

std::vector<Pose> read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open trajectory file: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,x,y,z,yaw") {
        throw DataError(path + ": missing trajectory header");
    }
    std::vector<Pose> poses;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 5 columns");
        }
        Pose p;
        p.t = parse_double(fields[0], path, line_no);
        p.position =
            Vec3(parse_double(fields[1], path, line_no), parse_double(fields[2], path, line_no),
                 parse_double(fields[3], path, line_no));
        p.heading = parse_double(fields[4], path, line_no);
        poses.push_back(p);
    }
    return poses;
}

}  // namespace bathyslam
