#ifndef BATHYSLAM_CORE_SURVEY_IO_HPP
#define BATHYSLAM_CORE_SURVEY_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bathyslam/core/types.hpp"

namespace bathyslam {

// Survey log file: delimited text, one beam per row,
//   ping_id,t,beam_x,beam_y,beam_z,dr_x,dr_y,dr_z,dr_yaw[,gt_x,gt_y,gt_z,gt_yaw]
// Header row required. Beams are in the vehicle frame; the DR pose (and the
// optional ground-truth pose, present for simulator output) repeat on every
// row of the same ping. Numbers are written with shortest round-trip
// precision, so a parse reproduces the written doubles bit for bit.

struct SurveyStep {
    Ping ping;
    Pose dr;
    std::optional<Pose> gt;
};

class SurveyLogWriter {
public:
    // Opens the file and writes the header. with_ground_truth selects the
    // 13-column layout.
    SurveyLogWriter(const std::string& path, bool with_ground_truth);
    ~SurveyLogWriter();
    SurveyLogWriter(const SurveyLogWriter&) = delete;
    SurveyLogWriter& operator=(const SurveyLogWriter&) = delete;

    void write_step(std::uint32_t ping_id, const SurveyStep& step);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Parses a whole survey log. Throws DataError naming the line on malformed
// rows, wrong column counts, or non-monotone timestamps. A header-only file
// yields an empty vector.
std::vector<SurveyStep> ingest_log(const std::string& path);

// Writes the steps of a finished mission in one call.
void write_survey_log(const std::string& path, const std::vector<SurveyStep>& steps,
                      bool with_ground_truth);

// Plain trajectory file: header `t,x,y,z,yaw`, one pose per row, same numeric
// conventions as the survey log.
void write_trajectory(const std::string& path, const std::vector<Pose>& poses);
std::vector<Pose> read_trajectory(const std::string& path);

// Shortest round-trip formatting used by all delimited writers.
std::string format_double(double v);

}  // namespace bathyslam

#endif
