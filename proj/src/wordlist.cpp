#include "wordlist.hpp"

// Fixed word lists for the synthetic generators. Changing any entry changes
// every generated corpus.

namespace costsense::wordlist {

const std::vector<std::string_view>& common() {
  static const std::vector<std::string_view> words{
      "able", "about", "above", "access", "account", "action", "active", "actor", "adult", "advice", "after",
      "again", "agent", "agree", "ahead", "alarm", "album", "alert", "alpha", "amber", "anchor", "angel",
      "angle", "animal", "answer", "apple", "april", "arena", "arrow", "artist", "asset", "atlas", "audio",
      "august", "author", "avenue", "award", "baby", "back", "badge", "baker", "balance", "ball", "band",
      "bank", "barn", "base", "basic", "basket", "battle", "beach", "bear", "beauty", "bed", "bell", "berry",
      "best", "bike", "bird", "black", "blade", "blank", "blog", "blue", "board", "boat", "body", "bold",
      "bonus", "book", "boost", "border", "boston", "bottle", "box", "brain", "branch", "brand", "brave",
      "bread", "breeze", "brick", "bridge", "bright", "broad", "brother", "brown", "budget", "build", "bunny",
      "burger", "business", "butter", "cabin", "cable", "cafe", "cake", "call", "camera", "camp", "canal",
      "candy", "canvas", "capital", "captain", "car", "card", "care", "cargo", "carpet", "carrot", "case",
      "cash", "castle", "cat", "cedar", "center", "chain", "chair", "chalk", "champ", "change", "channel",
      "charm", "chart", "chase", "cheap", "check", "chef", "cherry", "chess", "chicken", "child", "china",
      "choice", "cinema", "circle", "city", "class", "clean", "clear", "click", "client", "climb", "clock",
      "cloud", "club", "coach", "coast", "coffee", "coin", "cold", "color", "comet", "comfort", "common",
      "cook", "copper", "coral", "corner", "cottage", "cotton", "country", "couple", "course", "cousin",
      "cover", "craft", "crane", "cream", "credit", "crowd", "crown", "crystal", "culture", "cup", "curve",
      "daily", "dance", "dark", "data", "dawn", "day", "deal", "deep", "delta", "dental", "design", "desk",
      "detail", "diamond", "diary", "digital", "dinner", "direct", "doctor", "dog", "dollar", "dolphin",
      "door", "double", "dragon", "drama", "dream", "dress", "drive", "drum", "duck", "dune", "eagle",
      "early", "earth", "east", "easy", "echo", "edge", "editor", "eight", "elite", "ember", "empire",
      "energy", "engine", "equal", "escape", "event", "every", "expert", "express", "fabric", "face", "fact",
      "fair", "faith", "falcon", "family", "fancy", "farm", "fashion", "fast", "feather", "field", "film",
      "final", "finance", "fire", "first", "fish", "fit", "flag", "flame", "flash", "fleet", "flight",
      "flower", "fly", "focus", "folk", "food", "forest", "fork", "form", "fortune", "forum", "fox", "frame",
      "fresh", "friend", "frog", "front", "frost", "fruit", "fuel", "fun", "future", "galaxy", "game",
      "garden", "gate", "gear", "gem", "giant", "gift", "ginger", "glass", "global", "globe", "gold", "golf",
      "good", "grace", "grand", "grape", "graph", "grass", "green", "grid", "group", "grove", "guard",
      "guide", "guitar", "habit", "hall", "hammer", "hand", "happy", "harbor", "harvest", "hat", "hawk",
      "health", "heart", "heavy", "hello", "hero", "high", "hill", "hobby", "holiday", "home", "honey",
      "hope", "horizon", "horse", "host", "hotel", "house", "human", "idea", "image", "index", "indigo",
      "info", "inner", "insight", "iron", "island", "ivory", "jacket", "jade", "jazz", "jewel", "job", "joy",
      "judge", "juice", "jump", "jungle", "junior", "just", "keen", "kettle", "key", "kind", "king",
      "kitchen", "kite", "knight", "label", "lake", "lamp", "land", "laser", "lead", "leaf", "learn", "legal",
      "lemon", "level", "library", "light", "lime", "line", "link", "lion", "liquid", "list", "little",
      "live", "local", "lodge", "logic", "lotus", "love", "lucky", "lunar", "machine", "magic", "mail",
      "main", "major", "maker", "mango", "maple", "map", "marble", "march", "market", "master", "meadow",
      "media", "medal", "melody", "member", "menu", "metal", "metro", "middle", "mile", "mind", "mint",
      "mirror", "model", "modern", "moment", "money", "monkey", "moon", "morning", "motion", "motor",
      "mountain", "mouse", "movie", "music", "nation", "native", "nature", "navy", "near", "nest", "network",
      "news", "night", "noble", "north", "note", "novel", "number", "nurse", "oak", "ocean", "office",
      "olive", "omega", "online", "open", "optic", "orange", "orbit", "order", "origin", "otter", "owl",
      "pacific", "page", "paint", "palace", "palm", "panda", "paper", "park", "party", "pass", "path",
      "peace", "peach", "pearl", "pencil", "people", "pepper", "perfect", "phone", "photo", "piano", "pilot",
      "pine", "pixel", "pizza", "place", "planet", "plant", "plaza", "plum", "pocket", "poet", "point",
      "polar", "pond", "pony", "pool", "post", "power", "press", "prime", "print", "prize", "pro", "product",
      "profit", "public", "pulse", "pure", "purple", "quest", "quick", "quiet", "rabbit", "race", "radio",
      "rain", "rainbow", "ranch", "rapid", "raven", "ready", "real", "record", "red", "reef", "relax",
      "remote", "report", "rest", "rich", "ride", "right", "river", "road", "robin", "robot", "rock",
      "rocket", "root", "rose", "round", "royal", "ruby", "rule", "safe", "sage", "sail", "salt", "sand",
      "saturn", "save", "school", "science", "scout", "sea", "season", "secret", "secure", "select", "sense",
      "seven", "shadow", "share", "sharp", "shelf", "shell", "shine", "ship", "shop", "shore", "silver",
      "simple", "singer", "sister", "sky", "sleep", "slice", "smart", "smile", "snow", "soap", "social",
      "soft", "solar", "solid", "song", "sound", "south", "space", "spark", "speed", "spice", "spirit",
      "sport", "spring", "square", "stable", "star", "state", "station", "steel", "stone", "store", "storm",
      "story", "stream", "street", "studio", "style", "sugar", "summer", "summit", "sun", "super", "supply",
      "sure", "swan", "sweet", "swift", "table", "talent", "tango", "target", "taste", "tea", "team", "tech",
      "tiger", "timber", "time", "tiny", "title", "today", "token", "tool", "top", "torch", "total", "touch",
      "tour", "tower", "town", "track", "trade", "trail", "train", "travel", "tree", "trend", "tribe",
      "trust", "truth", "tulip", "turtle", "twin", "union", "unit", "urban", "valley", "value", "vector",
      "velvet", "venture", "verse", "video", "view", "villa", "vinyl", "violet", "vision", "vista", "visual",
      "voice", "voyage", "wagon", "walk", "wall", "water", "wave", "wealth", "weather", "web", "west",
      "whale", "wheel", "white", "wild", "willow", "wind", "window", "wine", "winter", "wisdom", "wolf",
      "wonder", "wood", "word", "work", "world", "yacht", "yard", "year", "yellow", "yoga", "young", "zebra",
      "zen", "zero", "zone",
  };
  return words;
}

const std::vector<std::string_view>& ham() {
  static const std::vector<std::string_view> words{
      "agenda", "meeting", "schedule", "project", "report", "review", "attached", "minutes", "quarterly",
      "team", "update", "draft", "thanks", "regards", "colleague", "office", "conference", "calendar",
      "deadline", "budget", "proposal", "contract", "invoice", "lunch", "weekend", "family", "holiday",
      "plan", "discuss", "question", "feedback", "notes", "presentation", "slides", "document", "version",
      "policy", "training", "seminar", "committee", "approval", "request", "confirm", "tomorrow", "morning",
      "afternoon", "call", "phone", "regarding", "follow", "summary", "forecast", "client", "partner",
      "department", "manager", "staff", "hiring", "interview", "candidate", "resume", "lecture", "course",
      "thesis", "research", "paper", "university", "library", "reading", "assignment", "grade", "student",
      "professor", "workshop", "travel", "flight", "hotel", "booking", "itinerary", "dinner", "birthday",
      "party", "photos", "game", "match", "score",
  };
  return words;
}

const std::vector<std::string_view>& spam() {
  static const std::vector<std::string_view> words{
      "free", "winner", "prize", "cash", "offer", "click", "now", "urgent", "limited", "deal", "discount",
      "viagra", "pills", "cheap", "loan", "credit", "guaranteed", "bonus", "casino", "jackpot", "lottery",
      "claim", "reward", "exclusive", "investment", "million", "dollars", "unsubscribe", "earn", "income",
      "opportunity", "risk", "amazing", "miracle", "weight", "loss", "diet", "pharmacy", "refinance",
      "mortgage", "rates", "approved", "instant", "access", "password", "verify", "suspended", "bank",
      "transfer", "inheritance", "beneficiary", "nigeria", "wire", "fee", "congratulations", "selected",
      "gift", "card", "voucher", "order", "act", "today", "hurry", "expire", "save", "percent", "lowest",
      "price", "replica", "watches", "luxury", "singles", "dating", "hot", "adult", "secret", "trick",
  };
  return words;
}

const std::vector<std::string_view>& tlds() {
  static const std::vector<std::string_view> words{
      "com", "net", "org", "info", "biz", "io", "co", "us", "uk", "de", "ru", "cn", "xyz", "top", "online",
      "site",
  };
  return words;
}

}  // namespace costsense::wordlist
