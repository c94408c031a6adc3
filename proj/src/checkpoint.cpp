#include "syge/checkpoint.hpp"

#include <memory>

#include <nlohmann/json.hpp>

#include "syge/detail/binio.hpp"

namespace syge {

using nlohmann::json;
using detail::FileCloser;

namespace {

void validate_consistency(const Checkpoint& ck, const std::string& context) {
  try {
    ck.params.validate_shapes();
  } catch (const std::invalid_argument& e) {
    throw io_error(context + ": shape mismatch: " + e.what());
  }
  if (static_cast<int64_t>(ck.vocab.size()) != ck.params.num_entities)
    throw io_error(context + ": shape mismatch: vocab has " + std::to_string(ck.vocab.size()) +
                   " entries but params expect " + std::to_string(ck.params.num_entities));
  if (static_cast<int64_t>(ck.relations.size()) != ck.params.num_relations)
    throw io_error(context + ": shape mismatch: relation vocab has " +
                   std::to_string(ck.relations.size()) + " entries but params expect " +
                   std::to_string(ck.params.num_relations));
}

}  // namespace

void checkpoint_save(const Checkpoint& ck, const std::string& path) {
  validate_consistency(ck, "refusing to save " + path);

  json manifest = json::array();
  for (ParamTable t : kAllTables) {
    const auto& arr = ck.params.table(t);
    if (!arr.empty()) manifest.push_back({table_name(t), arr.size()});
  }
  json header{{"model_kind", to_string(ck.params.kind)},
              {"dim", ck.params.dim},
              {"vocab", json{{"words", ck.vocab.words()}, {"counts", ck.vocab.counts()}}},
              {"relations",
               json{{"labels", ck.relations.labels()}, {"inverse", ck.relations.inverse_map()}}},
              {"train_config", to_json(ck.train_config)},
              {"manifest", manifest}};

  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), kCheckpointMagic, path);
  detail::write_text(f.get(), header.dump() + "\n", path);
  for (ParamTable t : kAllTables) {
    const auto& arr = ck.params.table(t);
    detail::write_le_array(f.get(), arr.data(), arr.size(), path);
  }
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

Checkpoint checkpoint_load(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "rb"));
  detail::expect_magic(f.get(), kCheckpointMagic, path);

  json header;
  try {
    header = json::parse(detail::read_header_line(f.get(), path));
  } catch (const json::exception& e) {
    throw io_error("corrupt header in " + path + ": " + e.what());
  }

  Checkpoint ck;
  try {
    ck.params.kind = model_kind_from(header.at("model_kind").get<std::string>());
    ck.params.dim = header.at("dim").get<int>();
    const auto& jv = header.at("vocab");
    const auto words = jv.at("words").get<std::vector<std::string>>();
    const auto counts = jv.at("counts").get<std::vector<uint64_t>>();
    if (words.size() != counts.size())
      throw io_error("corrupt header in " + path + ": vocab words/counts length skew");
    for (size_t i = 0; i < words.size(); ++i) ck.vocab.push(words[i], counts[i]);
    const auto& jr = header.at("relations");
    for (const auto& label : jr.at("labels").get<std::vector<std::string>>())
      ck.relations.push(label);
    ck.relations.set_inverse_map(jr.at("inverse").get<std::vector<uint32_t>>());
    ck.train_config = train_config_from_json(header.at("train_config"));
  } catch (const json::exception& e) {
    throw io_error("corrupt header in " + path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw io_error("corrupt header in " + path + ": " + e.what());
  }

  ck.params.num_entities = static_cast<int64_t>(ck.vocab.size());
  ck.params.num_relations = static_cast<int64_t>(ck.relations.size());
  if (ck.params.dim <= 0 || ck.params.dim % 2 != 0)
    throw io_error("invalid checkpoint " + path + ": dim must be even and positive, got " +
                   std::to_string(ck.params.dim));

  // manifest must name exactly the tables this kind uses, in fixed order
  size_t mi = 0;
  const auto& manifest = header.at("manifest");
  for (ParamTable t : kAllTables) {
    const int64_t want = ck.params.row_width(t) * ck.params.row_count(t);
    if (want == 0) continue;
    if (mi >= manifest.size())
      throw io_error("invalid checkpoint " + path + ": manifest missing " + table_name(t));
    const std::string name = manifest[mi][0].get<std::string>();
    const int64_t count = manifest[mi][1].get<int64_t>();
    ++mi;
    if (name != table_name(t) || count != want)
      throw io_error("invalid checkpoint " + path + ": shape mismatch in " + name + " (" +
                     std::to_string(count) + " vs expected " + std::to_string(want) + " for " +
                     table_name(t) + ")");
    auto& arr = ck.params.table(t);
    arr.resize(static_cast<size_t>(count));
    detail::read_le_array(f.get(), arr.data(), arr.size(), path);
  }
  if (mi != manifest.size())
    throw io_error("invalid checkpoint " + path + ": manifest has extra arrays");
  // trailing garbage means the writer and header disagree
  if (std::fgetc(f.get()) != EOF)
    throw io_error("invalid checkpoint " + path + ": trailing bytes after payload");

  validate_consistency(ck, "invalid checkpoint " + path);
  return ck;
}

}  // namespace syge
