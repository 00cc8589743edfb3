#pragma once

// Published provincial and prefectural decompositions (values in mbit), used
// to replay the report arithmetic.

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "thsynergy/decomposition.hpp"

namespace ths::testing {

struct PublishedRow {
  std::string_view label;
  std::uint64_t n;
  double delta_mbit;
};

inline constexpr std::array<PublishedRow, 31> kProvinceRows = {{
    {"Jiangsu", 62805, -12.48},       {"Shandong", 35152, -12.23},   {"Guangdong", 44692, -10.99},
    {"Zhejiang", 50699, -10.92},      {"Beijing", 17490, -8.68},     {"Hunan", 12019, -8.38},
    {"Shanghai", 23049, -7.93},       {"Hubei", 8969, -7.39},        {"Sichuan", 7807, -7.34},
    {"Liaoning", 15565, -7.25},       {"Anhui", 13275, -6.98},       {"Henan", 10899, -6.62},
    {"Heilongjiang", 9993, -5.99},    {"Hebei", 7062, -5.82},        {"Chongqing", 6015, -5.70},
    {"Fujian", 16001, -5.59},         {"Jilin", 6190, -5.09},        {"Jiangxi", 5790, -4.01},
    {"Guangxi", 3888, -3.33},         {"Shanxi", 2363, -2.72},       {"Tianjin", 6132, -2.69},
    {"Nei Mongol", 2605, -2.37},      {"Guizhou", 1695, -2.11},      {"Xinjiang Uygur", 1625, -2.05},
    {"Shaanxi", 2868, -1.92},         {"Gansu", 1510, -1.82},        {"Yunnan", 1707, -1.72},
    {"Hainan", 431, -0.54},           {"Ningxia Hui", 409, -0.29},   {"Qinghai", 254, -0.08},
    {"Xizang", 67, 0.01},
}};
inline constexpr double kProvinceTotalMbit = -196.48;

inline constexpr std::array<PublishedRow, 20> kPrefectureRows = {{
    {"Shanghai", 12742, -3.91}, {"Chongqing", 13488, -3.65}, {"Beijing", 4394, -3.32},  {"Tianjin", 6316, -2.60},
    {"Dezhou", 6630, -1.46},    {"Nanping", 1823, -0.96},    {"Yantai", 3127, -0.90},   {"Cangzhou", 7628, -0.82},
    {"Zhangzhou", 4830, -0.75}, {"Fuzhou", 2894, -0.72},     {"Tieling", 2349, -0.67},  {"Weifang", 4427, -0.58},
    {"Yuncheng", 735, -0.51},   {"Zhengzhou", 1900, -0.51},  {"Hengyang", 998, -0.47},  {"Deyang", 913, -0.44},
    {"Luohe", 2994, -0.44},     {"Yichun", 765, -0.43},      {"Luoyang", 1675, -0.41},  {"Yanbian Korean", 227, -0.38},
}};
inline constexpr double kPrefectureTotalMbit = -183.42;
// Only the 20 strongest prefectures are listed; the others are folded into one
// row so that the listed and unlisted deltas add up to the published sum.
inline constexpr PublishedRow kPrefectureRemainder = {"(remaining prefectures)", 230119, -16.91};
inline constexpr std::uint64_t kPrefectureN = 310974;

template <std::size_t K>
inline std::uint64_t published_n(const std::array<PublishedRow, K>& rows) {
  std::uint64_t n = 0;
  for (const auto& r : rows) n += r.n;
  return n;
}

inline SynergyReport province_fixture_report() {
  const auto n_total = published_n(kProvinceRows);
  std::vector<GroupContribution> groups;
  for (const auto& r : kProvinceRows) {
    groups.push_back(contribution_from_delta(std::string(r.label), r.n, n_total, InformationValue::from_millibits(r.delta_mbit)));
  }
  return assemble_report(InformationValue::from_millibits(kProvinceTotalMbit), n_total, std::move(groups), 1);
}

inline SynergyReport prefecture_fixture_report() {
  std::vector<GroupContribution> groups;
  for (const auto& r : kPrefectureRows) {
    groups.push_back(
        contribution_from_delta(std::string(r.label), r.n, kPrefectureN, InformationValue::from_millibits(r.delta_mbit)));
  }
  groups.push_back(contribution_from_delta(std::string(kPrefectureRemainder.label), kPrefectureRemainder.n, kPrefectureN,
                                           InformationValue::from_millibits(kPrefectureRemainder.delta_mbit)));
  return assemble_report(InformationValue::from_millibits(kPrefectureTotalMbit), kPrefectureN, std::move(groups), 2);
}

}  // namespace ths::testing
