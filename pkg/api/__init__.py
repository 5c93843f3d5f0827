# api package