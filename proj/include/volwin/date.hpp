#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace volwin {

/// Calendar day, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}
    Date(int year, unsigned month, unsigned day);

    /// Strict ISO-8601 `YYYY-MM-DD`; returns nullopt on anything else.
    static std::optional<Date> parse(std::string_view text);
    /// Like parse() but throws DataError naming the offending text.
    static Date from_iso(std::string_view text);

    [[nodiscard]] std::string iso() const;
    [[nodiscard]] constexpr std::int32_t days() const { return days_; }
    [[nodiscard]] std::chrono::year_month_day ymd() const;
    /// 0 = Monday ... 6 = Sunday.
    [[nodiscard]] unsigned iso_weekday_index() const;
    [[nodiscard]] bool is_weekend() const { return iso_weekday_index() >= 5; }

    [[nodiscard]] constexpr Date plus_days(std::int32_t n) const { return Date{days_ + n}; }
    [[nodiscard]] Date next_weekday() const;

    friend constexpr auto operator<=>(Date, Date) = default;

private:
    std::int32_t days_ = 0;
};

}  // namespace volwin
