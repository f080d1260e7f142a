#include "json.hpp"

#include "framesift/binary_io.hpp"
#include "framesift/corpus.hpp"

namespace framesift::corpus {

using nlohmann::json;

std::vector<VideoQuery> load_video_queries(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse video queries " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw ValidationError("video queries must be a JSON array");
  std::vector<VideoQuery> out;
  out.reserve(doc.size());
  for (const auto& item : doc) {
    try {
      VideoQuery q{item.at("query_id").get<std::string>(), item.at("video_id").get<std::string>(),
                   item.at("text").get<std::string>()};
      if (q.text.empty()) throw ValidationError("video query " + q.query_id + " has empty text");
      out.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw ValidationError("malformed video query in " + path.string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<FrameQuery> parse_frame_queries(std::string_view json_text, const Corpus& corpus) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("cannot parse frame annotations: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("frame annotations must be a JSON array");
  std::vector<FrameQuery> out;
  for (const auto& record : doc) {
    std::string video_id;
    try {
      video_id = record.at("video_id").get<std::string>();
      const auto texts = record.at("text_descriptions").get<std::vector<std::string>>();
      const auto& indices = record.at("frame_indices");
      if (!indices.is_array() || texts.size() != indices.size()) {
        throw ValidationError("video " + video_id + ": " + std::to_string(texts.size()) +
                              " text_descriptions but " + std::to_string(indices.size()) + " frame_indices");
      }
      const auto* video = corpus.find(video_id);
      if (!video) throw ValidationError("frame annotations reference unknown video " + video_id);
      for (std::size_t i = 0; i < texts.size(); ++i) {
        const auto& pair = indices[i];
        if (!pair.is_array() || pair.size() != 2) {
          throw ValidationError("video " + video_id + ": frame_indices[" + std::to_string(i) + "] is not a pair");
        }
        const int from = pair[0].get<int>();
        const int to = pair[1].get<int>();
        if (from < 0 || from > to) {
          throw ValidationError("video " + video_id + ": invalid range [" + std::to_string(from) + "," +
                                std::to_string(to) + "]");
        }
        if (to >= video->frame_count_1fps) {
          throw ValidationError("video " + video_id + ": frame_to " + std::to_string(to) +
                                " >= frame count " + std::to_string(video->frame_count_1fps));
        }
        if (texts[i].empty()) throw ValidationError("video " + video_id + ": empty text description");
        out.push_back({video_id + "#" + std::to_string(i), video_id, texts[i], from, to});
      }
    } catch (const json::exception& e) {
      throw ValidationError("malformed frame annotation record" +
                            (video_id.empty() ? std::string() : " for video " + video_id) + ": " + e.what());
    }
  }
  return out;
}

std::vector<FrameQuery> load_frame_queries(const std::filesystem::path& path, const Corpus& corpus) {
  return parse_frame_queries(read_text_file(path), corpus);
}

}  // namespace framesift::corpus
