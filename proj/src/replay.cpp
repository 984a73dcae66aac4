#include "honeysheets/notify.hpp"
#include "honeysheets/simharness.hpp"

namespace honeysheets::simharness {

ReplayStats replay(const ActionTrace& trace, ReplayHandles& h) {
    ReplayStats stats;
    const sheetstore::SnapshotMonitor clock(h.snapshot_cadence);
    const auto& registry = h.server.registry();

    for (std::size_t i = 0; i < trace.actions.size(); ++i) {
        const auto& a = trace.actions[i];
        try {
            switch (a.kind) {
            case ActionKind::Open: {
                if (!h.sheets.count(a.sheet_id))
                    throw ReplayError(i, "unknown sheet " + a.sheet_id);
                sheetstore::SheetEvent ev;
                ev.sheet_id = a.sheet_id;
                ev.kind = sheetstore::EventKind::Open;
                ev.occurred_at = a.at;
                notify::emit_notification(ev, h.mailbox_dir);
                ++stats.notifications;
                break;
            }
            case ActionKind::Modify: {
                const auto it = h.sheets.find(a.sheet_id);
                if (it == h.sheets.end())
                    throw ReplayError(i, "unknown sheet " + a.sheet_id);
                auto& sheet = it->second;
                const auto before = sheetstore::take_snapshot(sheet, a.at);
                sheetstore::HoneySheet edited = sheet;
                for (const auto& e : a.edits)
                    sheetstore::apply_edit_in_place(edited, e);
                const auto after = sheetstore::take_snapshot(edited, a.at);
                auto changes = sheetstore::diff(before, after);
                if (changes.empty())
                    throw ReplayError(i, "modification leaves the sheet unchanged");
                sheetstore::SheetEvent ev;
                ev.sheet_id = a.sheet_id;
                ev.kind = sheetstore::EventKind::Modification;
                ev.modification_class = sheetstore::classify(changes);
                ev.occurred_at = a.at;
                ev.snapshot_at = clock.next_capture(a.at);
                ev.changeset = std::move(changes);
                notify::emit_notification(ev, h.mailbox_dir);
                sheet = std::move(edited);
                ++stats.notifications;
                break;
            }
            case ActionKind::Click: {
                if (!registry.resolve(a.token))
                    throw ReplayError(i, "token " + a.token + " is not registered");
                honeylink::HttpRequest req;
                req.method = "GET";
                req.path = "/t/" + a.token;
                req.headers = {{"Accept", "text/html,application/xhtml+xml,application/xml;q=0.9,*/*;q=0.8"},
                               {"Host", registry.controlled_domain()},
                               {"User-Agent", a.user_agent}};
                req.remote_ip = a.ip;
                req.remote_port = a.port;
                const auto resp = h.server.handle(req, a.at);
                ++stats.requests;
                if (resp.status == 302)
                    ++stats.redirects;
                break;
            }
            }
        } catch (const ReplayError&) {
            throw;
        } catch (const std::exception& e) {
            throw ReplayError(i, e.what());
        }
    }
    return stats;
}

} // namespace honeysheets::simharness
