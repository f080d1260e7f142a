#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/sampling.hpp"

namespace framesift::sampling {

std::vector<int> select_frames(std::span<const double> values, double threshold, Direction direction) {
  if (!std::isfinite(threshold)) throw SamplingError("threshold must be finite");
  std::vector<int> out{0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool hit = direction == Direction::select_if_ge ? values[i] >= threshold : values[i] <= threshold;
    if (hit) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<int> uniform_stride(int frame_count, int stride) {
  if (frame_count < 1) throw SamplingError("uniform_stride: frame_count must be positive");
  if (stride < 1) throw SamplingError("uniform_stride: stride must be positive");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>((frame_count + stride - 1) / stride));
  for (int i = 0; i < frame_count; i += stride) out.push_back(i);
  return out;
}

ShotMapping map_shot_boundaries(std::span<const std::int64_t> boundaries, corpus::Rational fps, int frame_count) {
  if (fps.num <= 0 || fps.den <= 0) throw SamplingError("shot boundary mapping needs a positive frame rate");
  if (frame_count < 1) throw SamplingError("shot boundary mapping needs frame_count >= 1");
  std::vector<std::int64_t> sorted(boundaries.begin(), boundaries.end());
  std::sort(sorted.begin(), sorted.end());

  ShotMapping m;
  m.selected.push_back(0);
  for (const auto x : sorted) {
    if (x < 0) throw SamplingError("negative shot boundary " + std::to_string(x));
    // floor(x / (num/den)) in integers; x*den stays far from overflow for
    // realistic frame numbers and rates.
    std::int64_t idx = x * fps.den / fps.num;
    if (idx >= frame_count) {
      m.warnings.push_back("boundary " + std::to_string(x) + " maps to frame " + std::to_string(idx) +
                           ", clamped to " + std::to_string(frame_count - 1));
      idx = frame_count - 1;
    }
    m.selected.push_back(static_cast<int>(idx));
    if (idx + 1 < frame_count) m.selected.push_back(static_cast<int>(idx + 1));
  }
  std::sort(m.selected.begin(), m.selected.end());
  m.selected.erase(std::unique(m.selected.begin(), m.selected.end()), m.selected.end());
  return m;
}

ShotBoundaryTable load_shot_boundaries(const std::filesystem::path& path) {
  ShotBoundaryTable table;
  try {
    const auto j = nlohmann::json::parse(read_text_file(path));
    for (const auto& [video_id, xs] : j.items()) table[video_id] = xs.get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw SamplingError("malformed shot boundary file " + path.string() + ": " + e.what());
  }
  return table;
}

std::string to_jsonl(std::span<const SampleResult> results) {
  std::string out;
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["video_id"] = r.video_id;
    j["method_name"] = r.method.name();
    j["threshold_used"] = r.threshold_used ? nlohmann::ordered_json(*r.threshold_used) : nlohmann::ordered_json();
    j["selected"] = r.selected;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<SampleResult> parse_jsonl(std::string_view text) {
  std::vector<SampleResult> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      SampleResult r;
      r.video_id = j.at("video_id").get<std::string>();
      r.method = SamplingMethodSpec::parse(j.at("method_name").get<std::string>());
      if (!j.at("threshold_used").is_null()) r.threshold_used = j.at("threshold_used").get<double>();
      r.selected = j.at("selected").get<std::vector<int>>();
      if (r.selected.empty() || r.selected.front() != 0 ||
          std::adjacent_find(r.selected.begin(), r.selected.end(), std::greater_equal<>{}) != r.selected.end()) {
        throw SamplingError("selected indices must start at 0 and be strictly increasing");
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw SamplingError("sample line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SamplingError& e) {
      throw SamplingError("sample line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace framesift::sampling
